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

#include "xtars/corpus.h"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <unordered_map>
#include <unordered_set>

#include "json.hpp"
#include "xtars/error.h"
#include "xtars/hashing.h"
#include "xtars/rng.h"
#include "xtars/text.h"
#include "xtars/text_noise.h"

namespace xtars {

PreprocessResult preprocess(std::vector<CodedRecord> records) {
  PreprocessResult result;
  std::vector<CodedRecord> kept;
  kept.reserve(records.size());
  for (CodedRecord& r : records) {
    r.rt = to_lower(trim(r.rt));
    if (r.rt.empty()) {
      ++result.dropped_empty;
      continue;
    }
    kept.push_back(std::move(r));
  }
  // rt -> index of the winning record
  std::unordered_map<std::string, std::size_t> winner;
  winner.reserve(kept.size());
  for (std::size_t i = 0; i < kept.size(); ++i) {
    auto [it, inserted] = winner.emplace(kept[i].rt, i);
    if (inserted) continue;
    const CodedRecord& cur = kept[it->second];
    const CodedRecord& cand = kept[i];
    if (cand.timestamp > cur.timestamp ||
        (cand.timestamp == cur.timestamp && cand.id > cur.id)) {
      it->second = i;
    }
  }
  result.records.reserve(winner.size());
  for (std::size_t i = 0; i < kept.size(); ++i) {
    if (winner.at(kept[i].rt) == i) result.records.push_back(std::move(kept[i]));
  }
  result.dropped_duplicates = kept.size() - result.records.size();
  return result;
}

IngestResult filter_known_codes(std::vector<CodedRecord> records,
                                const Ontology& ontology) {
  IngestResult result;
  result.records.reserve(records.size());
  for (CodedRecord& r : records) {
    if (ontology.contains(r.llt_code)) {
      result.records.push_back(std::move(r));
    } else {
      ++result.dropped_unknown_code;
    }
  }
  return result;
}

std::vector<CodedRecord> augment_rare(const std::vector<CodedRecord>& records,
                                      std::size_t rare_threshold,
                                      std::uint64_t seed) {
  std::unordered_map<std::string, std::size_t> counts;
  for (const CodedRecord& r : records) ++counts[r.llt_code];
  std::vector<CodedRecord> out;
  for (const CodedRecord& r : records) {
    if (counts[r.llt_code] >= rare_threshold) continue;
    Rng rng(derive_seed(seed, r.id));
    out.push_back({r.id + ":split", word_split(r.rt, rng), r.llt_code,
                   Source::kAugmented, r.id, r.timestamp});
    out.push_back({r.id + ":char", character_change(r.rt, rng), r.llt_code,
                   Source::kAugmented, r.id, r.timestamp});
  }
  return out;
}

namespace {

bool by_id(const CodedRecord& a, const CodedRecord& b) { return a.id < b.id; }

}  // namespace

DatasetSplit make_splits(const std::vector<CodedRecord>& records,
                         const std::vector<CodedRecord>& augmented,
                         const SplitOptions& options) {
  require(options.test_fraction >= 0 && options.test_fraction <= 1 &&
              options.val_fraction >= 0 && options.val_fraction <= 1,
          "make_splits: fractions must lie in [0, 1]");
  std::vector<CodedRecord> coded;
  for (const CodedRecord& r : records) {
    if (r.source == Source::kCoded) coded.push_back(r);
  }
  if (coded.empty()) {
    fail(ErrorCode::kInvalidArgument,
         "make_splits: no coded records, cannot form a test set");
  }
  std::sort(coded.begin(), coded.end(),
            [](const CodedRecord& a, const CodedRecord& b) {
              if (a.timestamp != b.timestamp) return a.timestamp < b.timestamp;
              return a.id < b.id;
            });
  // The epsilon keeps exact products such as 0.05 * 100 from rounding up.
  const auto n_test = static_cast<std::size_t>(
      std::ceil(options.test_fraction * static_cast<double>(coded.size()) - 1e-9));
  DatasetSplit split;
  split.test.assign(coded.end() - static_cast<std::ptrdiff_t>(n_test), coded.end());
  coded.resize(coded.size() - n_test);

  std::sort(coded.begin(), coded.end(), by_id);
  Rng rng(derive_seed(options.seed, "validation-sample"));
  rng.shuffle(std::span(coded));
  const auto n_val = static_cast<std::size_t>(
      std::floor(options.val_fraction * static_cast<double>(coded.size()) + 1e-9));
  split.validation.assign(coded.begin(), coded.begin() + static_cast<std::ptrdiff_t>(n_val));
  std::sort(split.validation.begin(), split.validation.end(), by_id);

  std::unordered_set<std::string> held_out_ids;
  std::unordered_set<std::string> held_out_rts;
  for (const auto* part : {&split.validation, &split.test}) {
    for (const CodedRecord& r : *part) {
      held_out_ids.insert(r.id);
      held_out_rts.insert(r.rt);
    }
  }
  auto admit = [&](const CodedRecord& r) {
    if (held_out_ids.contains(r.id)) return false;
    if (r.origin_id && held_out_ids.contains(*r.origin_id)) return false;
    return !held_out_rts.contains(r.rt);
  };
  for (const CodedRecord& r : records) {
    if (admit(r)) split.train.push_back(r);
  }
  for (const CodedRecord& r : augmented) {
    if (admit(r)) split.train.push_back(r);
  }
  split.class_counts = class_frequency(split);
  return split;
}

std::map<std::string, std::size_t> class_frequency(const DatasetSplit& split) {
  std::map<std::string, std::size_t> counts;
  for (const CodedRecord& r : split.train) {
    if (r.source == Source::kAugmented || r.source == Source::kOntology) continue;
    ++counts[r.llt_code];
  }
  return counts;
}

DatasetSplit xtars_training_view(const DatasetSplit& split,
                                 std::size_t val_cap, std::uint64_t seed) {
  std::unordered_set<std::string> raw_ids;
  for (const auto* part : {&split.train, &split.validation, &split.test}) {
    for (const CodedRecord& r : *part) {
      if (r.source == Source::kCoded || r.source == Source::kAutocoded ||
          r.source == Source::kSynonym) {
        raw_ids.insert(r.id);
      }
    }
  }
  DatasetSplit view;
  for (const CodedRecord& r : split.train) {
    if (r.source == Source::kOntology) continue;
    if (r.source == Source::kAugmented &&
        !(r.origin_id && raw_ids.contains(*r.origin_id))) {
      continue;
    }
    view.train.push_back(r);
  }
  view.validation = split.validation;
  std::sort(view.validation.begin(), view.validation.end(), by_id);
  if (view.validation.size() > val_cap) {
    Rng rng(derive_seed(seed, "validation-cap"));
    rng.shuffle(std::span(view.validation));
    view.validation.resize(val_cap);
    std::sort(view.validation.begin(), view.validation.end(), by_id);
  }
  view.test = split.test;
  view.class_counts = split.class_counts;
  return view;
}

void write_split(const std::string& dir, const DatasetSplit& split) {
  std::filesystem::create_directories(dir);
  const std::filesystem::path root(dir);
  write_records_jsonl_file((root / "train.jsonl").string(), split.train);
  write_records_jsonl_file((root / "validation.jsonl").string(), split.validation);
  write_records_jsonl_file((root / "test.jsonl").string(), split.test);

  nlohmann::ordered_json summary;
  for (auto [name, part] : {std::pair{"train", &split.train},
                            std::pair{"validation", &split.validation},
                            std::pair{"test", &split.test}}) {
    nlohmann::ordered_json by_source;
    for (Source s : {Source::kCoded, Source::kAutocoded, Source::kSynonym,
                     Source::kOntology, Source::kAugmented}) {
      by_source[std::string(source_name(s))] = std::count_if(
          part->begin(), part->end(),
          [s](const CodedRecord& r) { return r.source == s; });
    }
    summary["splits"][name] = {{"size", part->size()}, {"by_source", by_source}};
  }
  std::map<std::size_t, std::size_t> histogram;
  for (const auto& [code, k] : split.class_counts) ++histogram[k];
  nlohmann::ordered_json hist;
  for (auto [k, n] : histogram) hist[std::to_string(k)] = n;
  summary["class_frequency_histogram"] = hist;
  nlohmann::ordered_json freq;
  for (const auto& [code, k] : split.class_counts) freq[code] = k;
  summary["class_frequency"] = freq;

  std::ofstream out(root / "summary.json", std::ios::binary);
  if (!out) fail(ErrorCode::kIo, "cannot write split summary in '" + dir + "'");
  out << summary.dump(2) << '\n';
}

DatasetSplit read_split(const std::string& dir) {
  const std::filesystem::path root(dir);
  for (const char* name : {"train.jsonl", "validation.jsonl", "test.jsonl"}) {
    if (!std::filesystem::exists(root / name)) {
      fail(ErrorCode::kIo, "split directory '" + dir + "' is missing " + name);
    }
  }
  DatasetSplit split;
  split.train = read_records_jsonl_file((root / "train.jsonl").string());
  split.validation = read_records_jsonl_file((root / "validation.jsonl").string());
  split.test = read_records_jsonl_file((root / "test.jsonl").string());
  split.class_counts = class_frequency(split);
  return split;
}

}  // namespace xtars
