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

#ifndef XTARS_PIPELINE_H_
#define XTARS_PIPELINE_H_

#include <cstdint>
#include <string>
#include <vector>

#include "xtars/config.h"
#include "xtars/corpus.h"
#include "xtars/ensemble.h"
#include "xtars/matcher.h"
#include "xtars/ontology.h"
#include "xtars/record.h"

namespace xtars {

// Ingested corpus: deduplicated records (raw plus ontology-derived) and the
// rare-class variants generated from the raw ones.
struct IngestedCorpus {
  std::vector<CodedRecord> records;
  std::vector<CodedRecord> augmented;
  std::size_t dropped_unknown_code = 0;
  std::size_t dropped_empty = 0;
  std::size_t dropped_duplicates = 0;
};

// Drops unknown codes, adds the ontology's verbatim and misspelled records,
// preprocesses everything and augments rare classes of coded and autocoded
// records.
IngestedCorpus ingest(std::vector<CodedRecord> raw, const Ontology& ontology,
                      const CorpusSettings& settings, std::uint64_t seed);

// ingest dir: records.jsonl, augmented.jsonl, ingest.json
void write_ingested(const std::string& dir, const IngestedCorpus& corpus);
IngestedCorpus read_ingested(const std::string& dir);

DatasetSplit split_corpus(const IngestedCorpus& corpus, const CorpusSettings& settings,
                          std::uint64_t seed);

// Member seeds for an ensemble run: one per configured seed, mixed with the
// run seed so that distinct runs give distinct members.
std::vector<std::uint64_t> ensemble_member_seeds(const EnsembleSettings& settings,
                                                 std::uint64_t run_seed);

// Trains the pair matcher on the restricted training view of `split`.
// `scorer` supplies hard negatives and the candidate-restricted validation.
MatcherModel train_pipeline_matcher(const DatasetSplit& split, const Scorer& scorer,
                                    const Ontology& ontology, const PipelineConfig& config,
                                    std::uint64_t seed);

}  // namespace xtars

#endif  // XTARS_PIPELINE_H_
