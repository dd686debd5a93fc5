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

#include "xtars/classifier.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "xtars/error.h"
#include "xtars/hashing.h"
#include "xtars/rng.h"

namespace xtars {

LabelIndex::LabelIndex(std::vector<std::string> codes) : codes_(std::move(codes)) {
  std::sort(codes_.begin(), codes_.end());
  codes_.erase(std::unique(codes_.begin(), codes_.end()), codes_.end());
  by_code_.reserve(codes_.size());
  for (std::size_t i = 0; i < codes_.size(); ++i) by_code_.emplace(codes_[i], i);
}

std::optional<std::size_t> LabelIndex::find(std::string_view code) const {
  auto it = by_code_.find(std::string(code));
  if (it == by_code_.end()) return std::nullopt;
  return it->second;
}

std::size_t LabelIndex::index_of(std::string_view code) const {
  auto idx = find(code);
  if (!idx) throw LookupError("llt_code '" + std::string(code) + "' is not in the label index");
  return *idx;
}

std::string LabelIndex::version() const {
  std::uint64_t h = fnv1a64("");
  for (const std::string& c : codes_) {
    h = fnv1a64(c, h);
    h = fnv1a64("\n", h);
  }
  return hex64(h);
}

CandidateSet top_n(const PredictiveDistribution& dist, std::size_t n) {
  const std::size_t k = dist.probabilities.size();
  if (n < 1 || n > k) {
    fail(ErrorCode::kInvalidArgument, "top_n: n=" + std::to_string(n) +
                                          " outside [1, " + std::to_string(k) + "]");
  }
  require(dist.labels && dist.labels->size() == k,
          "top_n: distribution is not aligned with its label index");
  std::vector<std::size_t> order(k);
  std::iota(order.begin(), order.end(), 0);
  const auto& p = dist.probabilities;
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n), order.end(),
                    [&p](std::size_t a, std::size_t b) {
                      if (p[a] != p[b]) return p[a] > p[b];
                      return a < b;
                    });
  CandidateSet out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back({dist.labels->code(order[i]), order[i], p[order[i]]});
  }
  return out;
}

double softmax(std::span<const double> logits, std::span<double> probs) {
  const double max = *std::max_element(logits.begin(), logits.end());
  double sum = 0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    probs[i] = std::exp(logits[i] - max);
    sum += probs[i];
  }
  for (double& p : probs) p /= sum;
  return max + std::log(sum);
}

double softmax_cross_entropy(std::span<const double> logits, std::size_t target,
                             std::span<double> dlogits) {
  const double log_z = softmax(logits, dlogits);
  dlogits[target] -= 1.0;
  return log_z - logits[target];
}

double softmax_regression_loss(std::span<const double> weights,
                               std::size_t num_labels,
                               std::span<const FeatureVector> batch,
                               std::span<const std::size_t> targets,
                               std::span<double> gradient) {
  require(batch.size() == targets.size() && !batch.empty(),
          "softmax_regression_loss: batch and targets must be non-empty and aligned");
  if (!gradient.empty()) {
    require(gradient.size() == weights.size(), "softmax_regression_loss: gradient size");
    std::fill(gradient.begin(), gradient.end(), 0.0);
  }
  const double scale = 1.0 / static_cast<double>(batch.size());
  std::vector<double> logits(num_labels), dlogits(num_labels);
  double loss = 0;
  for (std::size_t i = 0; i < batch.size(); ++i) {
    std::fill(logits.begin(), logits.end(), 0.0);
    for (const SparseEntry& e : batch[i].entries()) {
      const double* row = &weights[static_cast<std::size_t>(e.index) * num_labels];
      for (std::size_t k = 0; k < num_labels; ++k) logits[k] += e.value * row[k];
    }
    loss += softmax_cross_entropy(logits, targets[i], dlogits) * scale;
    if (gradient.empty()) continue;
    for (const SparseEntry& e : batch[i].entries()) {
      double* row = &gradient[static_cast<std::size_t>(e.index) * num_labels];
      for (std::size_t k = 0; k < num_labels; ++k) row[k] += scale * e.value * dlogits[k];
    }
  }
  return loss;
}

TrainedClassifier::TrainedClassifier(FeaturizerConfig featurizer,
                                     std::shared_ptr<const LabelIndex> labels,
                                     std::vector<float> weights,
                                     TrainingSummary summary)
    : featurizer_(std::move(featurizer)),
      labels_(std::move(labels)),
      weights_(std::move(weights)),
      summary_(std::move(summary)) {
  require(labels_ != nullptr && labels_->size() > 0, "TrainedClassifier: empty label index");
  require(weights_.size() == static_cast<std::size_t>(featurizer_.dim) * labels_->size(),
          "TrainedClassifier: weight matrix must be K x D");
}

std::vector<double> TrainedClassifier::logits(const FeatureVector& features) const {
  const std::size_t k = num_labels();
  std::vector<double> out(k, 0.0);
  for (const SparseEntry& e : features.entries()) {
    const float* row = &weights_[static_cast<std::size_t>(e.index) * k];
    for (std::size_t j = 0; j < k; ++j) out[j] += static_cast<double>(e.value) * row[j];
  }
  return out;
}

PredictiveDistribution TrainedClassifier::predict_features(const FeatureVector& features) const {
  PredictiveDistribution dist{labels_, std::vector<double>(num_labels())};
  softmax(logits(features), dist.probabilities);
  return dist;
}

PredictiveDistribution TrainedClassifier::predict_distribution(std::string_view rt) const {
  return predict_features(featurize(rt, featurizer_));
}

namespace {

std::size_t argmax(std::span<const double> values) {
  return static_cast<std::size_t>(std::max_element(values.begin(), values.end()) - values.begin());
}

double accuracy_on(const std::vector<float>& weights, std::size_t k,
                   const std::vector<FeatureVector>& feats,
                   const std::vector<std::size_t>& targets) {
  if (feats.empty()) return 0.0;
  std::size_t correct = 0;
  std::vector<double> logits(k);
  for (std::size_t i = 0; i < feats.size(); ++i) {
    std::fill(logits.begin(), logits.end(), 0.0);
    for (const SparseEntry& e : feats[i].entries()) {
      const float* row = &weights[static_cast<std::size_t>(e.index) * k];
      for (std::size_t j = 0; j < k; ++j) logits[j] += static_cast<double>(e.value) * row[j];
    }
    if (argmax(logits) == targets[i]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(feats.size());
}

}  // namespace

TrainedClassifier train_classifier(const std::vector<CodedRecord>& train,
                                   const std::vector<CodedRecord>& validation,
                                   const ClassifierHparams& hparams,
                                   std::uint64_t seed) {
  require(!train.empty(), "train_classifier: training set is empty");
  require(hparams.epochs >= 1 && hparams.batch_size >= 1 && hparams.learning_rate > 0,
          "train_classifier: epochs, batch_size and learning_rate must be positive");
  std::vector<std::string> codes;
  codes.reserve(train.size());
  for (const CodedRecord& r : train) codes.push_back(r.llt_code);
  auto labels = std::make_shared<const LabelIndex>(std::move(codes));
  const std::size_t k = labels->size();
  const std::size_t d = hparams.featurizer.dim;

  std::vector<FeatureVector> train_x;
  std::vector<std::size_t> train_y;
  train_x.reserve(train.size());
  for (const CodedRecord& r : train) {
    train_x.push_back(featurize(r.rt, hparams.featurizer));
    train_y.push_back(labels->index_of(r.llt_code));
  }
  std::vector<FeatureVector> val_x;
  std::vector<std::size_t> val_y;
  for (const CodedRecord& r : validation) {
    auto idx = labels->find(r.llt_code);
    if (!idx) {
      fail(ErrorCode::kInvalidArgument, "train_classifier: validation class '" + r.llt_code +
                                            "' is absent from the training label index");
    }
    val_x.push_back(featurize(r.rt, hparams.featurizer));
    val_y.push_back(*idx);
  }

  std::vector<float> weights(d * k);
  {
    Rng init(derive_seed(seed, "classifier-init"));
    for (float& w : weights) {
      w = static_cast<float>((2.0 * init.uniform() - 1.0) * hparams.init_scale);
    }
  }
  std::vector<float> m(d * k, 0.0f), v(d * k, 0.0f);
  std::vector<float> best = weights;
  TrainingSummary summary;
  summary.seed = seed;
  double best_acc = -1;

  std::vector<std::size_t> order(train_x.size());
  std::iota(order.begin(), order.end(), 0);
  Rng shuffler(derive_seed(seed, "classifier-shuffle"));

  std::vector<std::int32_t> slot_of(d, -1);
  std::vector<std::uint32_t> touched;
  std::vector<float> grad;
  std::vector<double> logits(k), dlogits(k);
  std::int64_t step = 0;

  for (int epoch = 1; epoch <= hparams.epochs; ++epoch) {
    shuffler.shuffle(std::span(order));
    for (std::size_t start = 0; start < order.size(); start += hparams.batch_size) {
      const std::size_t end = std::min(order.size(), start + hparams.batch_size);
      const double scale = 1.0 / static_cast<double>(end - start);
      for (std::size_t b = start; b < end; ++b) {
        const FeatureVector& x = train_x[order[b]];
        std::fill(logits.begin(), logits.end(), 0.0);
        for (const SparseEntry& e : x.entries()) {
          const float* row = &weights[static_cast<std::size_t>(e.index) * k];
          for (std::size_t j = 0; j < k; ++j) logits[j] += static_cast<double>(e.value) * row[j];
        }
        softmax_cross_entropy(logits, train_y[order[b]], dlogits);
        for (const SparseEntry& e : x.entries()) {
          std::int32_t& slot = slot_of[e.index];
          if (slot < 0) {
            slot = static_cast<std::int32_t>(touched.size());
            touched.push_back(e.index);
            grad.resize(touched.size() * k, 0.0f);
          }
          float* g = &grad[static_cast<std::size_t>(slot) * k];
          const double xv = e.value * scale;
          for (std::size_t j = 0; j < k; ++j) g[j] += static_cast<float>(xv * dlogits[j]);
        }
      }
      ++step;
      const double bc1 = 1.0 - std::pow(hparams.beta1, static_cast<double>(step));
      const double bc2 = 1.0 - std::pow(hparams.beta2, static_cast<double>(step));
      const auto lr = static_cast<float>(hparams.learning_rate * std::sqrt(bc2) / bc1);
      const auto b1 = static_cast<float>(hparams.beta1);
      const auto b2 = static_cast<float>(hparams.beta2);
      const auto eps = static_cast<float>(hparams.epsilon * std::sqrt(bc2));
      for (std::size_t s = 0; s < touched.size(); ++s) {
        const std::size_t base = static_cast<std::size_t>(touched[s]) * k;
        const float* g = &grad[s * k];
        for (std::size_t j = 0; j < k; ++j) {
          float& mj = m[base + j];
          float& vj = v[base + j];
          mj = b1 * mj + (1.0f - b1) * g[j];
          vj = b2 * vj + (1.0f - b2) * g[j] * g[j];
          weights[base + j] -= lr * mj / (std::sqrt(vj) + eps);
        }
        slot_of[touched[s]] = -1;
      }
      touched.clear();
      std::fill(grad.begin(), grad.end(), 0.0f);
      grad.clear();
    }
    const double acc = accuracy_on(weights, k, val_x, val_y);
    summary.epoch_validation_accuracy.push_back(acc);
    if (val_x.empty() || acc > best_acc) {
      best_acc = acc;
      best = weights;
      summary.selected_epoch = epoch;
      summary.validation_accuracy = acc;
    }
  }
  return TrainedClassifier(hparams.featurizer, std::move(labels), std::move(best),
                           std::move(summary));
}

double top1_accuracy(const Scorer& scorer, const std::vector<CodedRecord>& records) {
  if (records.empty()) return 0.0;
  std::size_t correct = 0;
  for (const CodedRecord& r : records) {
    const PredictiveDistribution dist = scorer.predict_distribution(r.rt);
    if (scorer.labels()->code(argmax(dist.probabilities)) == r.llt_code) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(records.size());
}

}  // namespace xtars
