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

#include "xtars/text_noise.h"

#include <utility>
#include <vector>

#include "xtars/error.h"
#include "xtars/text.h"

namespace xtars {

bool has_splittable_word(std::string_view text) {
  for (auto [start, len] : word_spans(text)) {
    if (len >= 2) return true;
  }
  return false;
}

std::string word_split(std::string_view text, Rng& rng) {
  std::vector<std::pair<std::size_t, std::size_t>> eligible;
  for (auto span : word_spans(text)) {
    if (span.second >= 2) eligible.push_back(span);
  }
  if (eligible.empty()) return character_change(text, rng);
  const auto [start, len] = eligible[rng.uniform_index(eligible.size())];
  const std::size_t cut = start + 1 + rng.uniform_index(len - 1);
  std::string out(text.substr(0, cut));
  out.push_back(' ');
  out.append(text.substr(cut));
  return out;
}

std::string character_change(std::string_view text, Rng& rng) {
  std::vector<std::size_t> positions;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (!is_space(text[i])) positions.push_back(i);
  }
  require(!positions.empty(), "character_change: text has no characters");
  const std::size_t pos = positions[rng.uniform_index(positions.size())];
  std::string out(text);
  const char original = out[pos];
  // 25 letters differ from an original lowercase letter; 26 otherwise.
  const bool original_is_letter = original >= 'a' && original <= 'z';
  const std::uint64_t choices = original_is_letter ? 25 : 26;
  char replacement = static_cast<char>('a' + rng.uniform_index(choices));
  if (original_is_letter && replacement >= original) ++replacement;
  out[pos] = replacement;
  return out;
}

}  // namespace xtars
