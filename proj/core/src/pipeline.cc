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

#include "xtars/pipeline.h"

#include <filesystem>
#include <utility>

#include "xtars/artifact.h"
#include "xtars/error.h"
#include "xtars/hashing.h"

namespace xtars {

namespace fs = std::filesystem;

IngestedCorpus ingest(std::vector<CodedRecord> raw, const Ontology& ontology,
                      const CorpusSettings& settings, std::uint64_t seed) {
  require(!ontology.empty(), "ingest: ontology is empty");
  IngestedCorpus out;
  IngestResult known = filter_known_codes(std::move(raw), ontology);
  out.dropped_unknown_code = known.dropped_unknown_code;
  std::vector<CodedRecord> all = std::move(known.records);
  for (CodedRecord& r : ontology_to_records(ontology, derive_seed(seed, "ontology"))) {
    all.push_back(std::move(r));
  }
  PreprocessResult pre = preprocess(std::move(all));
  out.dropped_empty = pre.dropped_empty;
  out.dropped_duplicates = pre.dropped_duplicates;
  out.records = std::move(pre.records);

  std::vector<CodedRecord> raw_labelled;
  for (const CodedRecord& r : out.records) {
    if (r.source == Source::kCoded || r.source == Source::kAutocoded) raw_labelled.push_back(r);
  }
  out.augmented = augment_rare(raw_labelled, settings.rare_threshold, derive_seed(seed, "augment"));
  return out;
}

void write_ingested(const std::string& dir, const IngestedCorpus& corpus) {
  const fs::path root(dir);
  fs::create_directories(root);
  write_records_jsonl_file((root / "records.jsonl").string(), corpus.records);
  write_records_jsonl_file((root / "augmented.jsonl").string(), corpus.augmented);
  nlohmann::ordered_json summary;
  summary["records"] = corpus.records.size();
  summary["augmented"] = corpus.augmented.size();
  summary["dropped_unknown_code"] = corpus.dropped_unknown_code;
  summary["dropped_empty"] = corpus.dropped_empty;
  summary["dropped_duplicates"] = corpus.dropped_duplicates;
  write_json_file((root / "ingest.json").string(), summary);
}

IngestedCorpus read_ingested(const std::string& dir) {
  const fs::path root(dir);
  for (const char* name : {"records.jsonl", "augmented.jsonl"}) {
    if (!fs::exists(root / name)) {
      fail(ErrorCode::kIo, std::string("missing ingest artifact: ") + (root / name).string());
    }
  }
  IngestedCorpus corpus;
  corpus.records = read_records_jsonl_file((root / "records.jsonl").string());
  corpus.augmented = read_records_jsonl_file((root / "augmented.jsonl").string());
  return corpus;
}

DatasetSplit split_corpus(const IngestedCorpus& corpus, const CorpusSettings& settings,
                          std::uint64_t seed) {
  SplitOptions options;
  options.test_fraction = settings.test_fraction;
  options.val_fraction = settings.val_fraction;
  options.seed = seed;
  return make_splits(corpus.records, corpus.augmented, options);
}

std::vector<std::uint64_t> ensemble_member_seeds(const EnsembleSettings& settings,
                                                 std::uint64_t run_seed) {
  std::vector<std::uint64_t> seeds;
  for (std::uint64_t s : settings.seeds) seeds.push_back(derive_seed(run_seed, s));
  return seeds;
}

MatcherModel train_pipeline_matcher(const DatasetSplit& split, const Scorer& scorer,
                                    const Ontology& ontology, const PipelineConfig& config,
                                    std::uint64_t seed) {
  config.sampler.validate();
  const DatasetSplit view =
      xtars_training_view(split, config.corpus.xtars_val_cap, derive_seed(seed, "view"));
  const LabelEmbeddings embeddings(ontology, config.featurizer);
  const MatchTrainingSetBuilder builder(view.train, &scorer, embeddings, config.sampler,
                                        derive_seed(seed, "negatives"));
  const bool resample = config.sampler.resample_each_epoch;
  const ExampleSource source = [&builder, resample](int epoch) {
    return builder.build(resample ? epoch : 0);
  };
  MatcherValidationSet validation;
  if (!view.validation.empty()) {
    validation =
        make_matcher_validation(view.validation, scorer, ontology, config.sampler.n_candidates);
  }
  return train_matcher(source, config.matcher, derive_seed(seed, "matcher"),
                       validation.items.empty() ? nullptr : &validation);
}

}  // namespace xtars
