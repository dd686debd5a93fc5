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

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "synthetic_vocab.h"
#include "xtars/corpus.h"
#include "xtars/error.h"
#include "xtars/hashing.h"
#include "xtars/rng.h"
#include "xtars/text.h"
#include "xtars/text_noise.h"

namespace xtars {
namespace {

template <typename Container>
std::string_view pick(const Container& items, Rng& rng) {
  return items[rng.uniform_index(items.size())];
}

bool is_core_word(std::string_view w) {
  return std::find(vocab::kAnatomy.begin(), vocab::kAnatomy.end(), w) !=
             vocab::kAnatomy.end() ||
         std::find(vocab::kCondition.begin(), vocab::kCondition.end(), w) !=
             vocab::kCondition.end();
}

std::string join(const std::vector<std::string>& words) {
  std::string out;
  for (const std::string& w : words) {
    if (w.empty()) continue;
    if (!out.empty()) out.push_back(' ');
    out += w;
  }
  return out;
}

std::vector<std::string> tokens_of(std::string_view text) {
  std::vector<std::string> out;
  for (std::string_view w : split_words(text)) out.emplace_back(w);
  return out;
}

// Drops one non-core token (modifier, qualifier, "of").
void drop_modifier(std::vector<std::string>& words, Rng& rng) {
  std::vector<std::size_t> optional;
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (!is_core_word(words[i])) optional.push_back(i);
  }
  if (optional.empty() || words.size() < 2) return;
  words.erase(words.begin() +
              static_cast<std::ptrdiff_t>(optional[rng.uniform_index(optional.size())]));
}

void swap_synonyms(std::vector<std::string>& words) {
  for (std::string& w : words) {
    for (auto [word, alt] : vocab::kConditionSynonym) {
      if (w == word) {
        w = alt;
        break;
      }
    }
  }
}

void abbreviate(std::vector<std::string>& words) {
  for (std::string& w : words) {
    for (auto [word, abbr] : vocab::kAbbreviation) {
      if (w == word) {
        w = abbr;
        break;
      }
    }
  }
}

std::string delete_char(const std::string& text, Rng& rng) {
  if (text.size() < 4) return text;
  std::string out = text;
  std::size_t pos = 1 + rng.uniform_index(out.size() - 2);
  if (out[pos] == ' ') return text;
  out.erase(pos, 1);
  return out;
}

std::string transpose_chars(const std::string& text, Rng& rng) {
  if (text.size() < 3) return text;
  std::string out = text;
  std::size_t pos = rng.uniform_index(out.size() - 1);
  std::swap(out[pos], out[pos + 1]);
  return out;
}

std::string capitalize_first(std::string text) {
  if (!text.empty() && text[0] >= 'a' && text[0] <= 'z') text[0] = static_cast<char>(text[0] - 32);
  return text;
}

// Free-text rendering of an LLT as a reporter might write it.
std::string noisy_rt(const LltEntry& llt, Rng& rng) {
  std::vector<std::string> words = tokens_of(llt.llt_name);
  if (rng.uniform() < 0.35) drop_modifier(words, rng);
  if (rng.uniform() < 0.20) swap_synonyms(words);
  if (rng.uniform() < 0.15) abbreviate(words);
  if (rng.uniform() < 0.40) words.insert(words.begin(), std::string(pick(vocab::kFillerPrefix, rng)));
  if (rng.uniform() < 0.20) words.emplace_back(pick(vocab::kFillerSuffix, rng));
  std::string text = join(words);
  const double u = rng.uniform();
  if (u < 0.12) {
    text = character_change(text, rng);
  } else if (u < 0.18) {
    text = word_split(text, rng);
  } else if (u < 0.26) {
    text = delete_char(text, rng);
  } else if (u < 0.30) {
    text = transpose_chars(text, rng);
  }
  if (rng.uniform() < 0.3) text = capitalize_first(text);
  return text;
}

// Curated alternative phrasing: no reporter filler, no typos.
std::string synonym_rt(const LltEntry& llt, Rng& rng) {
  std::vector<std::string> words = tokens_of(llt.llt_name);
  const double u = rng.uniform();
  if (u < 0.4) {
    swap_synonyms(words);
  } else if (u < 0.7) {
    abbreviate(words);
  } else if (words.size() >= 2) {
    // "<x> <y>" -> "<y> of <x>"
    std::string last = words.back();
    words.pop_back();
    words.insert(words.begin(), {last, "of"});
  }
  std::string text = join(words);
  if (text == llt.llt_name) text += " " + std::string(pick(vocab::kFillerSuffix, rng));
  return text;
}

std::string record_id(char prefix, std::size_t n) {
  char buf[24];
  std::snprintf(buf, sizeof(buf), "%c%07zu", prefix, n);
  return buf;
}

}  // namespace

std::vector<CodedRecord> generate_synthetic_corpus(
    const Ontology& ontology, const SyntheticCorpusConfig& config,
    std::uint64_t seed) {
  require(!ontology.empty(), "generate_synthetic_corpus: empty ontology");
  require(config.coded_share >= 0 && config.autocoded_share >= 0 &&
              config.coded_share + config.autocoded_share <= 1,
          "generate_synthetic_corpus: source shares must sum to <= 1");
  Rng rng(derive_seed(seed, "synthetic-corpus"));

  std::vector<std::size_t> rank(ontology.size());
  for (std::size_t i = 0; i < rank.size(); ++i) rank[i] = i;
  rng.shuffle(std::span(rank));
  std::vector<double> cumulative(rank.size());
  double total = 0;
  for (std::size_t r = 0; r < rank.size(); ++r) {
    total += std::pow(static_cast<double>(r + 1), -config.zipf_exponent);
    cumulative[r] = total;
  }

  std::vector<CodedRecord> out;
  out.reserve(config.num_records);
  std::size_t n_coded = 0, n_auto = 0, n_syn = 0;
  for (std::size_t i = 0; i < config.num_records; ++i) {
    const double target = rng.uniform() * total;
    const std::size_t r = static_cast<std::size_t>(
        std::upper_bound(cumulative.begin(), cumulative.end(), target) -
        cumulative.begin());
    const LltEntry& llt = ontology.entries()[rank[std::min(r, rank.size() - 1)]];

    CodedRecord rec;
    rec.llt_code = llt.llt_code;
    rec.timestamp = config.start + static_cast<Timestamp>(rng.uniform_index(
                                       static_cast<std::uint64_t>(config.span_seconds)));
    const double u = rng.uniform();
    if (u < config.coded_share) {
      rec.source = Source::kCoded;
      rec.id = record_id('c', ++n_coded);
      rec.rt = noisy_rt(llt, rng);
    } else if (u < config.coded_share + config.autocoded_share) {
      // The rule-based autocoder only fires on verbatim matches.
      rec.source = Source::kAutocoded;
      rec.id = record_id('a', ++n_auto);
      rec.rt = rng.uniform() < 0.5 ? capitalize_first(llt.llt_name) : llt.llt_name;
    } else {
      rec.source = Source::kSynonym;
      rec.id = record_id('s', ++n_syn);
      rec.rt = synonym_rt(llt, rng);
    }
    out.push_back(std::move(rec));
  }
  return out;
}

}  // namespace xtars
