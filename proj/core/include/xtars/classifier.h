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

#ifndef XTARS_CLASSIFIER_H_
#define XTARS_CLASSIFIER_H_

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "xtars/featurizer.h"
#include "xtars/record.h"

namespace xtars {

// Frozen bijection llt_code <-> [0, K). Codes are kept in ascending order,
// so index order is code order.
class LabelIndex {
 public:
  LabelIndex() = default;
  // Sorts and de-duplicates `codes`.
  explicit LabelIndex(std::vector<std::string> codes);

  std::size_t size() const { return codes_.size(); }
  const std::string& code(std::size_t index) const { return codes_.at(index); }
  std::span<const std::string> codes() const { return codes_; }
  std::optional<std::size_t> find(std::string_view code) const;
  // Throws LookupError.
  std::size_t index_of(std::string_view code) const;
  // Content hash, serialized as the label index version.
  std::string version() const;

  friend bool operator==(const LabelIndex& a, const LabelIndex& b) {
    return a.codes_ == b.codes_;
  }

 private:
  std::vector<std::string> codes_;
  std::unordered_map<std::string, std::size_t> by_code_;
};

struct PredictiveDistribution {
  std::shared_ptr<const LabelIndex> labels;
  std::vector<double> probabilities;

  std::size_t size() const { return probabilities.size(); }
};

struct Candidate {
  std::string llt_code;
  std::size_t index = 0;
  double probability = 0;
};
using CandidateSet = std::vector<Candidate>;

// The n most probable labels, by descending probability; ties go to the
// smaller llt_code. Throws unless 1 <= n <= K.
CandidateSet top_n(const PredictiveDistribution& dist, std::size_t n);

// Anything that maps a reported term onto a distribution over a label
// index: a single classifier or an ensemble.
class Scorer {
 public:
  virtual ~Scorer() = default;
  virtual const std::shared_ptr<const LabelIndex>& labels() const = 0;
  // Throws Error(kInvalidArgument) for an empty rt.
  virtual PredictiveDistribution predict_distribution(std::string_view rt) const = 0;
};

// Numerically stable softmax of `logits` written to `probs`; returns the
// log-partition.
double softmax(std::span<const double> logits, std::span<double> probs);

// Cross-entropy of softmax(logits) against `target` and its gradient with
// respect to the logits (probs - onehot).
double softmax_cross_entropy(std::span<const double> logits, std::size_t target,
                             std::span<double> dlogits);

// Mean softmax cross-entropy of a feature-major (D x K) linear model over a
// batch. When `gradient` is non-empty it receives d loss / d weights in the
// same layout. This is the objective the trainer minimizes.
double softmax_regression_loss(std::span<const double> weights,
                               std::size_t num_labels,
                               std::span<const FeatureVector> batch,
                               std::span<const std::size_t> targets,
                               std::span<double> gradient);

struct ClassifierHparams {
  FeaturizerConfig featurizer;
  int epochs = 30;
  std::size_t batch_size = 64;
  double learning_rate = 0.05;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  // Weights start uniform in [-init_scale, init_scale].
  double init_scale = 0.01;
};

struct TrainingSummary {
  std::uint64_t seed = 0;
  int selected_epoch = 0;
  double validation_accuracy = 0;
  std::vector<double> epoch_validation_accuracy;
};

// Linear softmax classifier over hashed text features. Immutable; safe for
// concurrent prediction.
class TrainedClassifier : public Scorer {
 public:
  // `weights` is feature-major: weights[f * K + k].
  TrainedClassifier(FeaturizerConfig featurizer,
                    std::shared_ptr<const LabelIndex> labels,
                    std::vector<float> weights, TrainingSummary summary);

  const std::shared_ptr<const LabelIndex>& labels() const override { return labels_; }
  PredictiveDistribution predict_distribution(std::string_view rt) const override;

  std::vector<double> logits(const FeatureVector& features) const;
  PredictiveDistribution predict_features(const FeatureVector& features) const;

  const FeaturizerConfig& featurizer() const { return featurizer_; }
  const TrainingSummary& summary() const { return summary_; }
  std::size_t num_labels() const { return labels_->size(); }
  std::uint32_t dim() const { return featurizer_.dim; }
  float weight(std::size_t label, std::uint32_t feature) const {
    return weights_[static_cast<std::size_t>(feature) * num_labels() + label];
  }
  std::span<const float> weights() const { return weights_; }

 private:
  FeaturizerConfig featurizer_;
  std::shared_ptr<const LabelIndex> labels_;
  std::vector<float> weights_;
  TrainingSummary summary_;
};

// Mini-batch Adam on mean cross-entropy. Only rows of features present in a
// batch are updated (lazy moments). The label index is the set of train
// codes. After every epoch validation accuracy is measured and the best
// epoch's weights are returned (earliest on ties). Deterministic in `seed`.
// Throws on empty train or a validation code outside the label index.
TrainedClassifier train_classifier(const std::vector<CodedRecord>& train,
                                   const std::vector<CodedRecord>& validation,
                                   const ClassifierHparams& hparams,
                                   std::uint64_t seed);

// Fraction of `records` whose argmax prediction equals the gold code.
double top1_accuracy(const Scorer& scorer, const std::vector<CodedRecord>& records);

// classifier directory: manifest.json, labels.csv, weights.bin.
void save_classifier(const std::string& dir, const TrainedClassifier& model);
// Verifies the checksums recorded in the manifest.
TrainedClassifier load_classifier(const std::string& dir);

}  // namespace xtars

#endif  // XTARS_CLASSIFIER_H_
