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

#ifndef XTARS_CORPUS_H_
#define XTARS_CORPUS_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "xtars/ontology.h"
#include "xtars/record.h"

namespace xtars {

struct PreprocessResult {
  std::vector<CodedRecord> records;
  std::size_t dropped_empty = 0;
  std::size_t dropped_duplicates = 0;
};

// Lowercases and trims every rt, drops records that are empty afterwards,
// and keeps a single record per distinct rt: the one with the greatest
// timestamp (ties: greatest id). Survivors keep their input order.
PreprocessResult preprocess(std::vector<CodedRecord> records);

struct IngestResult {
  std::vector<CodedRecord> records;
  std::size_t dropped_unknown_code = 0;
};

// Drops records whose llt_code is not in the active ontology.
IngestResult filter_known_codes(std::vector<CodedRecord> records,
                                const Ontology& ontology);

// For every record whose class has fewer than `rare_threshold` records in
// `records`, emits a word-split and a character-change variant with
// origin_id set to that record. Returns only the additions.
std::vector<CodedRecord> augment_rare(const std::vector<CodedRecord>& records,
                                      std::size_t rare_threshold,
                                      std::uint64_t seed);

struct DatasetSplit {
  std::vector<CodedRecord> train;
  std::vector<CodedRecord> validation;
  std::vector<CodedRecord> test;
  // Raw (non-augmented, non-ontology) train samples per class.
  std::map<std::string, std::size_t> class_counts;
};

struct SplitOptions {
  double test_fraction = 0.05;
  double val_fraction = 0.10;
  std::uint64_t seed = 0;
};

// test: the ceil(test_fraction * |coded|) most recent coded records (ties by
// id). validation: floor(val_fraction * |remaining coded|) coded records
// sampled uniformly. train: everything else plus `augmented`, minus
// augmented records whose origin landed in validation or test and minus any
// record whose rt also occurs in validation or test. Throws when there are
// no coded records.
DatasetSplit make_splits(const std::vector<CodedRecord>& records,
                         const std::vector<CodedRecord>& augmented,
                         const SplitOptions& options);

// Train restricted to coded, autocoded and synonym records plus augmented
// variants of those (ontology-derived records are dropped); validation
// reduced to a seeded random subset of at most `val_cap` records.
DatasetSplit xtars_training_view(const DatasetSplit& split,
                                 std::size_t val_cap, std::uint64_t seed);

// Train records per class excluding augmented and ontology-derived records.
std::map<std::string, std::size_t> class_frequency(const DatasetSplit& split);

// Split manifest: train.jsonl, validation.jsonl, test.jsonl and
// summary.json (counts per source, class frequencies and their histogram).
void write_split(const std::string& dir, const DatasetSplit& split);
DatasetSplit read_split(const std::string& dir);

struct SyntheticCorpusConfig {
  std::size_t num_records = 6000;
  double coded_share = 0.70;
  double autocoded_share = 0.12;  // remainder are synonyms
  // Class popularity ~ rank^-exponent over a seeded permutation of LLTs.
  double zipf_exponent = 0.9;
  Timestamp start = 1577836800;  // 2020-01-01
  std::int64_t span_seconds = 2 * 365 * 86400;
};

// Long-tailed coded/autocoded/synonym records whose rts are noisy renderings
// of LLT names: dropped modifiers, lay synonyms, abbreviations, reporter
// filler and typos. Deterministic in the seed.
std::vector<CodedRecord> generate_synthetic_corpus(
    const Ontology& ontology, const SyntheticCorpusConfig& config,
    std::uint64_t seed);

}  // namespace xtars

#endif  // XTARS_CORPUS_H_
