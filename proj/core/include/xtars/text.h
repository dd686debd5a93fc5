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

#ifndef XTARS_TEXT_H_
#define XTARS_TEXT_H_

#include <cstddef>
#include <string>
#include <utility>
#include <string_view>
#include <vector>

namespace xtars {

// ASCII-only case folding; bytes >= 0x80 pass through unchanged.
std::string to_lower(std::string_view text);

std::string_view trim(std::string_view text);

// Trim, lowercase, and collapse internal whitespace runs to one space.
std::string normalize_text(std::string_view text);

bool is_space(char c);

// (offset, length) of each whitespace-delimited word.
std::vector<std::pair<std::size_t, std::size_t>> word_spans(
    std::string_view text);

std::vector<std::string_view> split_words(std::string_view text);

}  // namespace xtars

#endif  // XTARS_TEXT_H_
