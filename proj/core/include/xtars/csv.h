//
// Copyright 2026 The xtars Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#ifndef XTARS_CSV_H_
#define XTARS_CSV_H_

#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace xtars::csv {

// Reads one logical CSV row (RFC 4180 quoting, quoted fields may span
// lines). Returns nullopt at end of input. Throws Error(kParse) on an
// unterminated quote.
std::optional<std::vector<std::string>> read_row(std::istream& in);

void write_row(std::ostream& out, const std::vector<std::string>& fields);

// Quotes a field if it contains a comma, quote, or line break.
std::string escape(std::string_view field);

}  // namespace xtars::csv

#endif  // XTARS_CSV_H_
