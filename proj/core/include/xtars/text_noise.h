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

#ifndef XTARS_TEXT_NOISE_H_
#define XTARS_TEXT_NOISE_H_

#include <string>
#include <string_view>

#include "xtars/rng.h"

namespace xtars {

// Inserts one space at a uniformly random interior position of a uniformly
// random word of length >= 2. Falls back to character_change when no word is
// long enough to split.
std::string word_split(std::string_view text, Rng& rng);

// Replaces one uniformly random non-space character with a uniformly random
// lowercase letter different from the original. Text must contain at least
// one non-space character.
std::string character_change(std::string_view text, Rng& rng);

// True when word_split can split `text` without falling back.
bool has_splittable_word(std::string_view text);

}  // namespace xtars

#endif  // XTARS_TEXT_NOISE_H_
