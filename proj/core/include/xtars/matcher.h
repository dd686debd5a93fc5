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

#ifndef XTARS_MATCHER_H_
#define XTARS_MATCHER_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "xtars/classifier.h"
#include "xtars/featurizer.h"
#include "xtars/ontology.h"
#include "xtars/record.h"
#include "xtars/rng.h"

namespace xtars {

// ---------------------------------------------------------------------------
// Label similarity

// Unit-norm featurization of every LLT name, indexed in ascending llt_code
// order. Cosine similarity is a sparse dot product through an inverted
// index, so a full similarity row costs O(nnz of the gold label * posting
// length) rather than O(K * nnz).
class LabelEmbeddings {
 public:
  LabelEmbeddings(const Ontology& ontology, const FeaturizerConfig& config);

  std::size_t size() const { return codes_.size(); }
  const std::string& code(std::size_t i) const { return codes_[i]; }
  const std::string& name(std::size_t i) const { return names_[i]; }
  const FeatureVector& embedding(std::size_t i) const { return vectors_[i]; }
  std::optional<std::size_t> find(std::string_view code) const;
  // Throws LookupError.
  std::size_t index_of(std::string_view code) const;
  const FeaturizerConfig& config() const { return config_; }

  // Cosine similarity of label `i` to every label (length K, including i).
  std::vector<double> similarity_row(std::size_t i) const;

 private:
  FeaturizerConfig config_;
  std::vector<std::string> codes_;
  std::vector<std::string> names_;
  std::vector<FeatureVector> vectors_;
  std::unordered_map<std::string, std::size_t> by_code_;
  // Inverted index in CSR form: the postings of feature f are
  // posting_labels_/posting_values_[posting_start_[f], posting_start_[f + 1]).
  std::vector<std::uint32_t> posting_start_;
  std::vector<std::uint32_t> posting_labels_;
  std::vector<float> posting_values_;
};

struct ScoredLabel {
  std::size_t index;  // into LabelEmbeddings
  double similarity;
};

// Cosine similarity of `gold` to every other label, in label order; the
// gold label itself is never part of the output. Throws LookupError for an
// unknown gold code.
std::vector<ScoredLabel> label_similarities(std::string_view gold,
                                            const LabelEmbeddings& embeddings);

// ---------------------------------------------------------------------------
// Negative sampling

// Baseline: draws proportional to max(similarity, 0) over all non-gold
// labels, without replacement (iterative renormalization). When every
// clamped weight is zero the draw is uniform.
class ProportionalSampler {
 public:
  explicit ProportionalSampler(std::span<const ScoredLabel> similarities);

  // Distinct label indices; at most `neg`, fewer only if fewer labels carry
  // non-zero probability. All labels are returned when there are <= neg.
  std::vector<std::size_t> sample(std::size_t neg, Rng& rng) const;

  std::span<const std::size_t> support() const { return support_; }
  // First-draw probabilities aligned with support().
  std::span<const double> probabilities() const { return probabilities_; }

 private:
  std::vector<std::size_t> all_;
  std::vector<std::size_t> support_;
  std::vector<double> probabilities_;
};

// Hard-negative cosine sampler: keeps only the k most similar labels (ties
// by ascending code), rescales their similarities with softmax(sim / T) and
// draws without replacement from that distribution. Every other label has
// probability exactly zero.
class TopKSoftmaxSampler {
 public:
  TopKSoftmaxSampler(std::span<const ScoredLabel> similarities, std::size_t k,
                     double temperature);

  std::vector<std::size_t> sample(std::size_t neg, Rng& rng) const;

  // The kept labels, most similar first.
  std::span<const std::size_t> support() const { return support_; }
  std::span<const double> probabilities() const { return probabilities_; }

 private:
  std::vector<std::size_t> support_;
  std::vector<double> probabilities_;
};

// Draws without replacement from `weights` (need not be normalized) by
// iterative renormalization. Returns positions into `weights`.
std::vector<std::size_t> draw_without_replacement(std::span<const double> weights,
                                                  std::size_t count, Rng& rng);

enum class CosineSampling { kProportional, kTopKSoftmax };

struct SamplerConfig {
  std::size_t neg = 5;
  std::size_t k_multiplier = 3;
  double temperature = 0.01;
  bool use_clf_top = true;
  std::size_t n_candidates = 5;
  CosineSampling cosine = CosineSampling::kTopKSoftmax;
  // Draw fresh cosine negatives every epoch instead of once.
  bool resample_each_epoch = true;

  std::size_t k() const { return k_multiplier * neg; }
  void validate() const;
};

std::vector<std::string> sample_negatives_tars(std::string_view gold,
                                               const LabelEmbeddings& embeddings,
                                               std::size_t neg, Rng& rng);

std::vector<std::string> sample_negatives_xtars(std::string_view gold,
                                                const LabelEmbeddings& embeddings,
                                                const SamplerConfig& config, Rng& rng);

inline constexpr std::size_t kClassifierNegatives = 5;

// The scorer's top-5 classes minus the gold class: five labels when gold is
// outside the top-5, four when it is inside. With K < 5 every non-gold label
// is returned. Throws when K < 2.
std::vector<std::string> classifier_hard_negatives(const PredictiveDistribution& dist,
                                                   std::string_view gold);
std::vector<std::string> classifier_hard_negatives(const Scorer& scorer, std::string_view rt,
                                                   std::string_view gold);

// ---------------------------------------------------------------------------
// Training pairs

enum class StrategyTag { kPositive, kCosTars, kCosXtars, kClfTop };
std::string_view strategy_tag_name(StrategyTag tag);

struct MatchExample {
  std::string record_id;
  std::string rt;
  std::string llt_code;
  std::string label_name;
  bool is_match = false;
  StrategyTag strategy = StrategyTag::kPositive;
};

// Builds (rt, label) pairs: per record one positive, the classifier hard
// negatives when enabled, and `neg` cosine negatives, de-duplicated against
// each other and the gold label. Classifier predictions and similarity
// samplers are computed once; `build(epoch)` redraws cosine negatives from
// a per-(epoch, record) seeded stream, so the output does not depend on
// record order or scheduling.
class MatchTrainingSetBuilder {
 public:
  MatchTrainingSetBuilder(std::vector<CodedRecord> records, const Scorer* scorer,
                          const LabelEmbeddings& embeddings, SamplerConfig config,
                          std::uint64_t seed);

  std::vector<MatchExample> build(int epoch) const;
  std::size_t num_records() const { return records_.size(); }

 private:
  std::vector<CodedRecord> records_;
  const LabelEmbeddings& embeddings_;
  SamplerConfig config_;
  std::uint64_t seed_;
  std::vector<std::vector<std::string>> clf_negatives_;
  std::unordered_map<std::size_t, ProportionalSampler> proportional_;
  std::unordered_map<std::size_t, TopKSoftmaxSampler> topk_;
};

// One-shot form of MatchTrainingSetBuilder::build(0). `scorer` may be null
// when config.use_clf_top is false.
std::vector<MatchExample> build_match_training_set(const std::vector<CodedRecord>& records,
                                                   const Scorer* scorer,
                                                   const LabelEmbeddings& embeddings,
                                                   const SamplerConfig& config,
                                                   std::uint64_t seed);

// ---------------------------------------------------------------------------
// Pair model

// Joint features of an (rt, label name) pair. Hashed blocks (each
// L2-normalized): rt n-grams, label n-grams, n-grams and words shared by
// both, and label words missing from the rt. Dense scalars occupy the first
// kPairScalarSlots indices: token Jaccard, n-gram Jaccard, n-gram cosine,
// label-token coverage and label-n-gram coverage.
struct PairFeaturizerConfig {
  FeaturizerConfig text{.ngram_sizes = {2, 3, 4}, .word_unigrams = true, .dim = 1u << 18,
                        .hash_seed = 0};
  float block_weight = 1.0f;

  friend bool operator==(const PairFeaturizerConfig&, const PairFeaturizerConfig&) = default;
};

inline constexpr std::uint32_t kPairScalarSlots = 8;

FeatureVector pair_features(std::string_view rt, std::string_view label_name,
                            const PairFeaturizerConfig& config);

struct MatcherHparams {
  PairFeaturizerConfig features;
  int epochs = 8;
  std::size_t batch_size = 32;
  double learning_rate = 0.02;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  // Held-out records when no candidate validation set is supplied.
  std::size_t validation_records = 200;
};

// Mean binary cross-entropy of a logistic model and its gradient. Either
// gradient span may be empty to skip it.
double logistic_loss(std::span<const double> weights, double bias,
                     std::span<const FeatureVector> batch, std::span<const bool> labels,
                     std::span<double> weight_gradient, double* bias_gradient);

struct MatcherSummary {
  std::uint64_t seed = 0;
  int selected_epoch = 0;
  double validation_accuracy = 0;
  std::vector<double> epoch_validation_accuracy;
};

class MatcherModel {
 public:
  MatcherModel(PairFeaturizerConfig features, std::vector<float> weights, float bias,
               MatcherSummary summary);

  // Match probability, strictly inside (0, 1).
  double score_pair(std::string_view rt, std::string_view label_name) const;
  double score_features(const FeatureVector& features) const;

  const PairFeaturizerConfig& features() const { return features_; }
  std::span<const float> weights() const { return weights_; }
  float bias() const { return bias_; }
  const MatcherSummary& summary() const { return summary_; }

 private:
  PairFeaturizerConfig features_;
  std::vector<float> weights_;
  float bias_;
  MatcherSummary summary_;
};

// Candidate-restricted validation: accuracy of picking the gold label among
// the scorer's top candidates.
struct MatcherValidationSet {
  struct Item {
    std::string rt;
    std::string gold;
    std::vector<std::pair<std::string, std::string>> candidates;  // code, name
  };
  std::vector<Item> items;
};

MatcherValidationSet make_matcher_validation(const std::vector<CodedRecord>& records,
                                             const Scorer& scorer, const Ontology& ontology,
                                             std::size_t n_candidates);

using ExampleSource = std::function<std::vector<MatchExample>(int epoch)>;

// Logistic regression on pair features by mini-batch Adam (lazy moments).
// With a validation set, the kept checkpoint maximizes candidate-restricted
// accuracy; otherwise up to hparams.validation_records records are held out
// and scored by whether their positive outranks all their negatives.
// Throws when the examples contain only one class.
MatcherModel train_matcher(const ExampleSource& source, const MatcherHparams& hparams,
                           std::uint64_t seed,
                           const MatcherValidationSet* validation = nullptr);
MatcherModel train_matcher(const std::vector<MatchExample>& examples,
                           const MatcherHparams& hparams, std::uint64_t seed,
                           const MatcherValidationSet* validation = nullptr);

// ---------------------------------------------------------------------------
// Candidate-limited prediction

struct XtarsResult {
  std::string llt_code;
  double match_score = 0;
  CandidateSet candidates;
  std::vector<double> match_scores;  // aligned with candidates
};

// Scores exactly n candidates (the scorer's top-n) with the matcher and
// returns the best; ties go to the candidate the scorer ranked higher.
XtarsResult xtars_predict(const Scorer& scorer, const MatcherModel& matcher,
                          const Ontology& ontology, std::string_view rt, std::size_t n);
XtarsResult xtars_predict(const PredictiveDistribution& dist, const MatcherModel& matcher,
                          const Ontology& ontology, std::string_view rt, std::size_t n);

// matcher directory: manifest.json (pair featurizer, sampler config, bias,
// checksums) + weights.bin (1 x D).
void save_matcher(const std::string& dir, const MatcherModel& model,
                  const SamplerConfig& sampler);
struct LoadedMatcher {
  MatcherModel model;
  SamplerConfig sampler;
};
LoadedMatcher load_matcher(const std::string& dir);

}  // namespace xtars

#endif  // XTARS_MATCHER_H_
