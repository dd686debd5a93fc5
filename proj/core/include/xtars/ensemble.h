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

#ifndef XTARS_ENSEMBLE_H_
#define XTARS_ENSEMBLE_H_

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "xtars/classifier.h"

namespace xtars {

// Deep ensemble: identically configured classifiers that differ only in
// their training seed, averaged at prediction time.
class Ensemble : public Scorer {
 public:
  // Throws unless there is at least one member, all members share one label
  // index, and seeds are pairwise distinct.
  explicit Ensemble(std::vector<std::shared_ptr<const TrainedClassifier>> members);

  const std::shared_ptr<const LabelIndex>& labels() const override;
  // Element-wise arithmetic mean of member distributions. Each element is
  // summed in sorted order, so the result is bit-identical under any member
  // permutation.
  PredictiveDistribution predict_distribution(std::string_view rt) const override;

  std::span<const std::shared_ptr<const TrainedClassifier>> members() const { return members_; }
  std::vector<std::uint64_t> seeds() const;

 private:
  std::vector<std::shared_ptr<const TrainedClassifier>> members_;
};

// One member per seed. Throws on empty or duplicate seeds.
Ensemble train_ensemble(const std::vector<CodedRecord>& train,
                        const std::vector<CodedRecord>& validation,
                        const ClassifierHparams& hparams,
                        const std::vector<std::uint64_t>& seeds);

PredictiveDistribution mean_distribution(std::span<const PredictiveDistribution> members);

// -sum p ln p in nats, with 0 ln 0 = 0.
double predictive_entropy(std::span<const double> probabilities);
inline double predictive_entropy(const PredictiveDistribution& dist) {
  return predictive_entropy(dist.probabilities);
}

struct BracketFractions {
  double certain = 0.8;     // "top-80%": most certain share
  double uncertain = 0.5;   // "btm-50%": least certain share
  double uncertain_tail = 0.25;  // "btm-25%"
};

// Certainty brackets over a test set. Records are ranked by ascending
// entropy (ties by id); top = first floor(certain * N), btm = last
// floor(uncertain * N), btm-tail = last floor(uncertain_tail * N).
struct BracketPartition {
  std::vector<std::string> ids;
  std::vector<double> entropies;
  std::vector<bool> top;
  std::vector<bool> bottom;
  std::vector<bool> bottom_tail;
  BracketFractions fractions;

  std::size_t size() const { return ids.size(); }
};

BracketPartition bracket_partition(std::span<const std::string> ids,
                                   std::span<const double> entropies,
                                   const BracketFractions& fractions = {});

// ensemble.json lists member directories (relative) and their seeds.
void save_ensemble(const std::string& dir, const Ensemble& ensemble);
Ensemble load_ensemble(const std::string& dir);

}  // namespace xtars

#endif  // XTARS_ENSEMBLE_H_
