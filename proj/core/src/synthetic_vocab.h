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

#ifndef XTARS_SRC_SYNTHETIC_VOCAB_H_
#define XTARS_SRC_SYNTHETIC_VOCAB_H_

#include <array>
#include <string_view>
#include <utility>

namespace xtars::vocab {

inline constexpr std::array<std::string_view, 44> kAnatomy = {
    "leg",     "arm",      "toe",     "foot",    "hand",     "knee",
    "hip",     "back",     "neck",    "chest",   "abdomen",  "head",
    "eye",     "ear",      "skin",    "liver",   "kidney",   "lung",
    "heart",   "stomach",  "bowel",   "bladder", "joint",    "muscle",
    "shoulder", "wrist",   "ankle",   "throat",  "mouth",    "nose",
    "scalp",   "finger",   "spine",   "pelvis",  "breast",   "thyroid",
    "colon",   "gum",      "lip",     "jaw",     "elbow",    "groin",
    "tongue",  "calf"};

inline constexpr std::array<std::string_view, 42> kCondition = {
    "pain",        "swelling",   "rash",        "infection",  "inflammation",
    "bleeding",    "cramp",      "stiffness",   "numbness",   "ulcer",
    "lesion",      "oedema",     "fracture",    "discomfort", "tenderness",
    "weakness",    "itching",    "spasm",       "haemorrhage", "necrosis",
    "gangrene",    "failure",    "impairment",  "injury",     "disorder",
    "cyst",        "mass",       "abscess",     "erythema",   "dryness",
    "burning",     "tingling",   "irritation",  "hypertrophy", "atrophy",
    "dysfunction", "obstruction", "congestion", "discharge",  "neoplasm",
    "haematoma",   "laceration"};

inline constexpr std::array<std::string_view, 30> kModifier = {
    "acute",       "chronic",     "mild",        "severe",     "intermittent",
    "recurrent",   "bilateral",   "unilateral",  "left",       "right",
    "upper",       "lower",       "localised",   "generalised", "persistent",
    "transient",   "sudden",      "progressive", "nocturnal",  "postoperative",
    "aggravated",  "worsening",   "painful",     "diffuse",    "focal",
    "minor",       "moderate",    "episodic",    "sharp",      "dull"};

inline constexpr std::array<std::string_view, 10> kQualifier = {
    "aggravated", "nos",      "syndrome",   "episode",   "flare",
    "on exertion", "at night", "after meals", "worsened", "site"};

// Condition word -> lay or alternate wording used for LLT variants and
// noisy reported terms.
inline constexpr std::array<std::pair<std::string_view, std::string_view>, 16>
    kConditionSynonym = {{{"pain", "ache"},
                          {"swelling", "puffiness"},
                          {"rash", "eruption"},
                          {"bleeding", "bleed"},
                          {"oedema", "edema"},
                          {"haemorrhage", "hemorrhage"},
                          {"itching", "pruritus"},
                          {"numbness", "hypoaesthesia"},
                          {"fracture", "break"},
                          {"inflammation", "itis"},
                          {"tenderness", "soreness"},
                          {"erythema", "redness"},
                          {"haematoma", "bruise"},
                          {"injury", "trauma"},
                          {"failure", "insufficiency"},
                          {"cramp", "cramping"}}};

// Reporter noise around a reported term.
inline constexpr std::array<std::string_view, 14> kFillerPrefix = {
    "on and off", "patient reports", "c/o",        "worsening of", "slight",
    "very",       "ongoing",         "new onset",  "episodes of",  "mild",
    "increased",  "occasional",      "complained of", "suspected"};

inline constexpr std::array<std::string_view, 8> kFillerSuffix = {
    "since yesterday", "reported", "nos",       "grade 1",
    "grade 2",         "ongoing",  "resolved",  "x2"};

inline constexpr std::array<std::pair<std::string_view, std::string_view>, 8>
    kAbbreviation = {{{"left", "lt"},
                      {"right", "rt"},
                      {"bilateral", "bilat"},
                      {"abdomen", "abd"},
                      {"chronic", "chr"},
                      {"postoperative", "post-op"},
                      {"generalised", "gen"},
                      {"infection", "inf"}}};

}  // namespace xtars::vocab

#endif  // XTARS_SRC_SYNTHETIC_VOCAB_H_
