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

#ifndef XTARS_TIMESTAMP_H_
#define XTARS_TIMESTAMP_H_

#include <cstdint>
#include <string>
#include <string_view>

namespace xtars {

// Seconds since 1970-01-01T00:00:00Z.
using Timestamp = std::int64_t;

// Accepts "YYYY-MM-DD", "YYYY-MM-DDTHH:MM:SS" with optional fractional
// seconds and an optional "Z" or "+HH:MM"/"-HH:MM" offset. Throws
// Error(kParse) otherwise.
Timestamp parse_iso8601(std::string_view text);

// Formats as "YYYY-MM-DDTHH:MM:SSZ".
std::string format_iso8601(Timestamp ts);

}  // namespace xtars

#endif  // XTARS_TIMESTAMP_H_
