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

#ifndef XTARS_BUNDLE_H_
#define XTARS_BUNDLE_H_

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "xtars/classifier.h"
#include "xtars/config.h"
#include "xtars/ensemble.h"
#include "xtars/eval.h"
#include "xtars/matcher.h"
#include "xtars/ontology.h"

namespace xtars {

enum class ScorerKind { kClassifier, kEnsemble };

// A self-contained model directory:
//   bundle.json   kinds, versions and checksums of the parts below
//   ontology.csv  the ontology the model was trained against
//   scorer/       a classifier or ensemble directory
//   matcher/      optional pair matcher (present for xTARS bundles)
struct ModelBundle {
  std::string model_version;
  Ontology ontology;
  ScorerKind scorer_kind = ScorerKind::kEnsemble;
  std::shared_ptr<const Scorer> scorer;
  std::optional<MatcherModel> matcher;
  SamplerConfig sampler;

  bool is_xtars() const { return matcher.has_value(); }
  std::string model_tag() const;
};

void save_bundle(const std::string& dir, const Ontology& ontology,
                 const TrainedClassifier& classifier);
void save_bundle(const std::string& dir, const Ontology& ontology, const Ensemble& ensemble);
// Copies the scorer from an existing bundle directory and adds a matcher.
void save_xtars_bundle(const std::string& dir, const std::string& scorer_bundle_dir,
                       const MatcherModel& matcher, const SamplerConfig& sampler);

// Verifies every checksum recorded in bundle.json. Throws Error(kIo) naming
// the missing file when the directory is not a bundle.
ModelBundle load_bundle(const std::string& dir);

struct PipelineOutput {
  std::string llt_code;
  double distribution_confidence = 0;  // max of the scorer's distribution
  std::optional<double> match_score;   // xTARS only
  double entropy = 0;                  // of the scorer's distribution
};

PipelineOutput run_pipeline(const ModelBundle& bundle, std::string_view rt);

double select_confidence(const PipelineOutput& out, ConfidenceSource source);

std::vector<Prediction> predict_records(const ModelBundle& bundle,
                                        const std::vector<CodedRecord>& records,
                                        ConfidenceSource source);

// Fraction of records whose gold code is among the scorer's top-n.
double candidate_recall(const Scorer& scorer, const std::vector<CodedRecord>& records,
                        std::size_t n);

struct EvalOptions {
  bool table2 = true;
  bool table_a1 = true;
  std::vector<double> thresholds = {0.5};
  BracketFractions brackets;
  ConfidenceSource confidence = ConfidenceSource::kAuto;
  // When set, brackets use this scorer's entropies instead of each model's
  // own, so every row is cut along the same partition.
  const Scorer* bracket_reference = nullptr;
};

// Brackets come from the entropies carried by the predictions.
EvalReport evaluate_predictions(const std::string& model_tag,
                                const std::vector<Prediction>& predictions,
                                const std::vector<CodedRecord>& records,
                                const std::map<std::string, std::size_t>& class_counts,
                                const Ontology& ontology, const EvalOptions& options);

EvalReport evaluate_bundle(const ModelBundle& bundle, const std::vector<CodedRecord>& records,
                           const std::map<std::string, std::size_t>& class_counts,
                           const EvalOptions& options);

}  // namespace xtars

#endif  // XTARS_BUNDLE_H_
