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

#include "xtars/matcher.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <unordered_set>

#include "xtars/error.h"
#include "xtars/hashing.h"
#include "xtars/text.h"

namespace xtars {

// ---------------------------------------------------------------------------
// LabelEmbeddings

LabelEmbeddings::LabelEmbeddings(const Ontology& ontology, const FeaturizerConfig& config)
    : config_(config) {
  std::vector<const LltEntry*> entries;
  for (const LltEntry& e : ontology.entries()) entries.push_back(&e);
  std::sort(entries.begin(), entries.end(),
            [](const LltEntry* a, const LltEntry* b) { return a->llt_code < b->llt_code; });
  for (const LltEntry* e : entries) {
    by_code_.emplace(e->llt_code, codes_.size());
    codes_.push_back(e->llt_code);
    names_.push_back(e->llt_name);
    vectors_.push_back(featurize(e->llt_name, config_));
  }
  posting_start_.assign(static_cast<std::size_t>(config_.dim) + 1, 0);
  for (const FeatureVector& v : vectors_) {
    for (const SparseEntry& e : v.entries()) ++posting_start_[e.index + 1];
  }
  std::partial_sum(posting_start_.begin(), posting_start_.end(), posting_start_.begin());
  posting_labels_.resize(posting_start_.back());
  posting_values_.resize(posting_start_.back());
  std::vector<std::uint32_t> fill(posting_start_.begin(), posting_start_.end() - 1);
  for (std::size_t i = 0; i < vectors_.size(); ++i) {
    for (const SparseEntry& e : vectors_[i].entries()) {
      const std::uint32_t at = fill[e.index]++;
      posting_labels_[at] = static_cast<std::uint32_t>(i);
      posting_values_[at] = e.value;
    }
  }
}

std::optional<std::size_t> LabelEmbeddings::find(std::string_view code) const {
  auto it = by_code_.find(std::string(code));
  if (it == by_code_.end()) return std::nullopt;
  return it->second;
}

std::size_t LabelEmbeddings::index_of(std::string_view code) const {
  auto i = find(code);
  if (!i) throw LookupError("label '" + std::string(code) + "' has no embedding");
  return *i;
}

std::vector<double> LabelEmbeddings::similarity_row(std::size_t i) const {
  std::vector<double> row(codes_.size(), 0.0);
  for (const SparseEntry& e : vectors_.at(i).entries()) {
    const double weight = e.value;
    for (std::uint32_t p = posting_start_[e.index]; p < posting_start_[e.index + 1]; ++p) {
      row[posting_labels_[p]] += weight * posting_values_[p];
    }
  }
  for (double& s : row) s = std::clamp(s, -1.0, 1.0);
  return row;
}

std::vector<ScoredLabel> label_similarities(std::string_view gold,
                                            const LabelEmbeddings& embeddings) {
  const std::size_t g = embeddings.index_of(gold);
  const std::vector<double> row = embeddings.similarity_row(g);
  std::vector<ScoredLabel> out;
  out.reserve(row.size() - 1);
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (i != g) out.push_back({i, row[i]});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Sampling

std::vector<std::size_t> draw_without_replacement(std::span<const double> weights,
                                                  std::size_t count, Rng& rng) {
  const std::size_t n = weights.size();
  count = std::min(count, n);
  std::vector<double> w(weights.begin(), weights.end());
  std::vector<std::size_t> out;
  out.reserve(count);
  std::vector<bool> taken(n, false);
  for (std::size_t c = 0; c < count; ++c) {
    double total = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (!taken[i]) total += w[i];
    }
    std::size_t pick = n;
    if (total > 0) {
      const double target = rng.uniform() * total;
      double acc = 0;
      std::size_t last_positive = n;
      for (std::size_t i = 0; i < n; ++i) {
        if (taken[i] || w[i] <= 0) continue;
        last_positive = i;
        acc += w[i];
        if (target < acc) {
          pick = i;
          break;
        }
      }
      if (pick == n) pick = last_positive;  // rounding at the upper end
    } else {
      // Only zero-weight items remain; continue uniformly among them.
      std::vector<std::size_t> rest;
      for (std::size_t i = 0; i < n; ++i) {
        if (!taken[i]) rest.push_back(i);
      }
      pick = rest[rng.uniform_index(rest.size())];
    }
    taken[pick] = true;
    out.push_back(pick);
  }
  return out;
}

ProportionalSampler::ProportionalSampler(std::span<const ScoredLabel> similarities) {
  double total = 0;
  for (const ScoredLabel& s : similarities) {
    all_.push_back(s.index);
    if (s.similarity > 0) {
      support_.push_back(s.index);
      probabilities_.push_back(s.similarity);
      total += s.similarity;
    }
  }
  if (support_.empty()) {
    support_ = all_;
    probabilities_.assign(all_.size(), all_.empty() ? 0.0 : 1.0 / static_cast<double>(all_.size()));
  } else {
    for (double& p : probabilities_) p /= total;
  }
}

std::vector<std::size_t> ProportionalSampler::sample(std::size_t neg, Rng& rng) const {
  if (all_.size() <= neg) return all_;
  std::vector<std::size_t> out;
  for (std::size_t pos : draw_without_replacement(probabilities_, std::min(neg, support_.size()), rng)) {
    out.push_back(support_[pos]);
  }
  return out;
}

TopKSoftmaxSampler::TopKSoftmaxSampler(std::span<const ScoredLabel> similarities,
                                       std::size_t k, double temperature) {
  require(temperature > 0, "TopKSoftmaxSampler: temperature must be positive");
  std::vector<ScoredLabel> ranked(similarities.begin(), similarities.end());
  const std::size_t keep = std::min(k, ranked.size());
  auto more_similar = [](const ScoredLabel& a, const ScoredLabel& b) {
    if (a.similarity != b.similarity) return a.similarity > b.similarity;
    return a.index < b.index;
  };
  const auto cut = ranked.begin() + static_cast<std::ptrdiff_t>(keep);
  if (cut != ranked.end()) std::nth_element(ranked.begin(), cut, ranked.end(), more_similar);
  ranked.resize(keep);
  std::sort(ranked.begin(), ranked.end(), more_similar);
  if (ranked.empty()) return;
  const double max = ranked.front().similarity;
  double total = 0;
  for (const ScoredLabel& s : ranked) {
    support_.push_back(s.index);
    probabilities_.push_back(std::exp((s.similarity - max) / temperature));
    total += probabilities_.back();
  }
  for (double& p : probabilities_) p /= total;
}

std::vector<std::size_t> TopKSoftmaxSampler::sample(std::size_t neg, Rng& rng) const {
  std::vector<std::size_t> out;
  for (std::size_t pos : draw_without_replacement(probabilities_, neg, rng)) {
    out.push_back(support_[pos]);
  }
  return out;
}

void SamplerConfig::validate() const {
  require(temperature > 0, "sampler: temperature must be positive");
  require(k_multiplier >= 1, "sampler: k_multiplier must be >= 1");
  require(n_candidates >= 1, "sampler: n_candidates must be >= 1");
}

namespace {

std::vector<std::string> to_codes(const LabelEmbeddings& embeddings,
                                  const std::vector<std::size_t>& indices) {
  std::vector<std::string> out;
  out.reserve(indices.size());
  for (std::size_t i : indices) out.push_back(embeddings.code(i));
  return out;
}

}  // namespace

std::vector<std::string> sample_negatives_tars(std::string_view gold,
                                               const LabelEmbeddings& embeddings,
                                               std::size_t neg, Rng& rng) {
  const auto sims = label_similarities(gold, embeddings);
  return to_codes(embeddings, ProportionalSampler(sims).sample(neg, rng));
}

std::vector<std::string> sample_negatives_xtars(std::string_view gold,
                                                const LabelEmbeddings& embeddings,
                                                const SamplerConfig& config, Rng& rng) {
  config.validate();
  const auto sims = label_similarities(gold, embeddings);
  return to_codes(embeddings,
                  TopKSoftmaxSampler(sims, config.k(), config.temperature).sample(config.neg, rng));
}

std::vector<std::string> classifier_hard_negatives(const PredictiveDistribution& dist,
                                                   std::string_view gold) {
  if (dist.size() < 2) {
    fail(ErrorCode::kInvalidArgument, "classifier_hard_negatives: needs at least 2 classes");
  }
  std::vector<std::string> out;
  for (const Candidate& c : top_n(dist, std::min(kClassifierNegatives, dist.size()))) {
    if (c.llt_code != gold) out.push_back(c.llt_code);
  }
  return out;
}

std::vector<std::string> classifier_hard_negatives(const Scorer& scorer, std::string_view rt,
                                                   std::string_view gold) {
  return classifier_hard_negatives(scorer.predict_distribution(rt), gold);
}

std::string_view strategy_tag_name(StrategyTag tag) {
  switch (tag) {
    case StrategyTag::kPositive: return "positive";
    case StrategyTag::kCosTars: return "cos_tars";
    case StrategyTag::kCosXtars: return "cos_xtars";
    case StrategyTag::kClfTop: return "clf_top";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------
// Training-set construction

MatchTrainingSetBuilder::MatchTrainingSetBuilder(std::vector<CodedRecord> records,
                                                 const Scorer* scorer,
                                                 const LabelEmbeddings& embeddings,
                                                 SamplerConfig config, std::uint64_t seed)
    : records_(std::move(records)), embeddings_(embeddings), config_(config), seed_(seed) {
  config_.validate();
  if (config_.use_clf_top) {
    require(scorer != nullptr, "match training set: classifier negatives need a scorer");
    clf_negatives_.reserve(records_.size());
    for (const CodedRecord& r : records_) {
      clf_negatives_.push_back(classifier_hard_negatives(*scorer, r.rt, r.llt_code));
    }
  }
  if (config_.neg == 0) return;
  for (const CodedRecord& r : records_) {
    const std::size_t g = embeddings_.index_of(r.llt_code);
    if (proportional_.contains(g) || topk_.contains(g)) continue;
    const auto sims = label_similarities(r.llt_code, embeddings_);
    if (config_.cosine == CosineSampling::kProportional) {
      proportional_.emplace(g, ProportionalSampler(sims));
    } else {
      topk_.emplace(g, TopKSoftmaxSampler(sims, config_.k(), config_.temperature));
    }
  }
}

std::vector<MatchExample> MatchTrainingSetBuilder::build(int epoch) const {
  const std::uint64_t epoch_seed =
      derive_seed(seed_, static_cast<std::uint64_t>(config_.resample_each_epoch ? epoch : 0));
  std::vector<MatchExample> out;
  out.reserve(records_.size() * (1 + kClassifierNegatives + config_.neg));
  for (std::size_t r = 0; r < records_.size(); ++r) {
    const CodedRecord& rec = records_[r];
    const std::size_t g = embeddings_.index_of(rec.llt_code);
    out.push_back({rec.id, rec.rt, rec.llt_code, embeddings_.name(g), true,
                   StrategyTag::kPositive});
    std::unordered_set<std::string> used = {rec.llt_code};
    auto add_negative = [&](const std::string& code, StrategyTag tag) {
      if (!used.insert(code).second) return;
      out.push_back({rec.id, rec.rt, code, embeddings_.name(embeddings_.index_of(code)), false,
                     tag});
    };
    if (config_.use_clf_top) {
      for (const std::string& code : clf_negatives_[r]) add_negative(code, StrategyTag::kClfTop);
    }
    if (config_.neg == 0) continue;
    Rng rng(derive_seed(epoch_seed, rec.id));
    if (config_.cosine == CosineSampling::kProportional) {
      for (std::size_t i : proportional_.at(g).sample(config_.neg, rng)) {
        add_negative(embeddings_.code(i), StrategyTag::kCosTars);
      }
    } else {
      for (std::size_t i : topk_.at(g).sample(config_.neg, rng)) {
        add_negative(embeddings_.code(i), StrategyTag::kCosXtars);
      }
    }
  }
  return out;
}

std::vector<MatchExample> build_match_training_set(const std::vector<CodedRecord>& records,
                                                   const Scorer* scorer,
                                                   const LabelEmbeddings& embeddings,
                                                   const SamplerConfig& config,
                                                   std::uint64_t seed) {
  return MatchTrainingSetBuilder(records, scorer, embeddings, config, seed).build(0);
}

// ---------------------------------------------------------------------------
// Pair features

namespace {

enum PairBlock : std::uint64_t {
  kRtNgrams = 101,
  kLabelNgrams,
  kSharedNgrams,
  kSharedWords,
  kMissingLabelWords,
};

std::size_t intersection_size(const std::vector<std::uint64_t>& a,
                              const std::vector<std::uint64_t>& b) {
  std::size_t n = 0;
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      ++n;
      ++i;
      ++j;
    }
  }
  return n;
}

std::vector<std::uint64_t> word_hashes(std::string_view text) {
  std::vector<std::uint64_t> out;
  const std::string lowered = to_lower(text);
  for (std::string_view w : split_words(lowered)) out.push_back(fnv1a64(w));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

double ratio(std::size_t num, std::size_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

class BlockWriter {
 public:
  BlockWriter(FeatureBuilder& builder, const PairFeaturizerConfig& config)
      : builder_(builder), config_(config),
        span_(config.text.dim - kPairScalarSlots) {}

  void write(PairBlock block, const std::vector<std::uint64_t>& hashes) {
    if (hashes.empty()) return;
    const std::uint64_t seed = derive_seed(config_.text.hash_seed, block);
    const float value =
        config_.block_weight / static_cast<float>(std::sqrt(static_cast<double>(hashes.size())));
    for (std::uint64_t h : hashes) {
      const std::uint64_t x = mix64(h ^ seed);
      const float sign = (x >> 63) ? -1.0f : 1.0f;
      builder_.add(kPairScalarSlots + static_cast<std::uint32_t>(x % span_), sign * value);
    }
  }

 private:
  FeatureBuilder& builder_;
  const PairFeaturizerConfig& config_;
  std::uint32_t span_;
};

}  // namespace

FeatureVector pair_features(std::string_view rt, std::string_view label_name,
                            const PairFeaturizerConfig& config) {
  require(config.text.dim > 2 * kPairScalarSlots, "pair_features: dimension too small");
  if (trim(rt).empty()) fail(ErrorCode::kInvalidArgument, "pair_features: empty rt");
  const auto rt_ngrams = ngram_hashes(rt, config.text);
  const auto label_ngrams = ngram_hashes(label_name, config.text);
  const auto rt_words = word_hashes(rt);
  const auto label_words = word_hashes(label_name);

  std::vector<std::uint64_t> shared_ngrams, shared_words, missing_words;
  std::set_intersection(rt_ngrams.begin(), rt_ngrams.end(), label_ngrams.begin(),
                        label_ngrams.end(), std::back_inserter(shared_ngrams));
  std::set_intersection(rt_words.begin(), rt_words.end(), label_words.begin(), label_words.end(),
                        std::back_inserter(shared_words));
  std::set_difference(label_words.begin(), label_words.end(), rt_words.begin(), rt_words.end(),
                      std::back_inserter(missing_words));

  const std::size_t word_union = rt_words.size() + label_words.size() - shared_words.size();
  const std::size_t ngram_union = rt_ngrams.size() + label_ngrams.size() - shared_ngrams.size();
  const double ngram_cosine =
      rt_ngrams.empty() || label_ngrams.empty()
          ? 0.0
          : static_cast<double>(shared_ngrams.size()) /
                std::sqrt(static_cast<double>(rt_ngrams.size()) *
                          static_cast<double>(label_ngrams.size()));

  FeatureBuilder builder(config.text.dim);
  builder.add(0, static_cast<float>(ratio(shared_words.size(), word_union)));
  builder.add(1, static_cast<float>(ratio(shared_ngrams.size(), ngram_union)));
  builder.add(2, static_cast<float>(ngram_cosine));
  builder.add(3, static_cast<float>(ratio(shared_words.size(), label_words.size())));
  builder.add(4, static_cast<float>(ratio(intersection_size(rt_ngrams, label_ngrams),
                                          label_ngrams.size())));
  BlockWriter blocks(builder, config);
  blocks.write(kRtNgrams, rt_ngrams);
  blocks.write(kLabelNgrams, label_ngrams);
  blocks.write(kSharedNgrams, shared_ngrams);
  blocks.write(kSharedWords, shared_words);
  blocks.write(kMissingLabelWords, missing_words);
  return builder.finish(/*l2_normalize=*/false);
}

// ---------------------------------------------------------------------------
// Logistic model

namespace {

constexpr double kLogitClamp = 30.0;

double sigmoid(double z) {
  z = std::clamp(z, -kLogitClamp, kLogitClamp);
  return 1.0 / (1.0 + std::exp(-z));
}

// log(1 + exp(x)) without overflow.
double softplus(double x) {
  return x > 0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

}  // namespace

double logistic_loss(std::span<const double> weights, double bias,
                     std::span<const FeatureVector> batch, std::span<const bool> labels,
                     std::span<double> weight_gradient, double* bias_gradient) {
  require(batch.size() == labels.size() && !batch.empty(),
          "logistic_loss: batch and labels must be non-empty and aligned");
  if (!weight_gradient.empty()) std::fill(weight_gradient.begin(), weight_gradient.end(), 0.0);
  if (bias_gradient) *bias_gradient = 0;
  const double scale = 1.0 / static_cast<double>(batch.size());
  double loss = 0;
  for (std::size_t i = 0; i < batch.size(); ++i) {
    double z = bias;
    for (const SparseEntry& e : batch[i].entries()) z += weights[e.index] * e.value;
    loss += scale * (labels[i] ? softplus(-z) : softplus(z));
    const double dz = scale * (1.0 / (1.0 + std::exp(-z)) - (labels[i] ? 1.0 : 0.0));
    if (!weight_gradient.empty()) {
      for (const SparseEntry& e : batch[i].entries()) weight_gradient[e.index] += dz * e.value;
    }
    if (bias_gradient) *bias_gradient += dz;
  }
  return loss;
}

MatcherModel::MatcherModel(PairFeaturizerConfig features, std::vector<float> weights,
                           float bias, MatcherSummary summary)
    : features_(std::move(features)),
      weights_(std::move(weights)),
      bias_(bias),
      summary_(std::move(summary)) {
  require(weights_.size() == features_.text.dim, "MatcherModel: weight vector must have length D");
}

double MatcherModel::score_features(const FeatureVector& features) const {
  double z = bias_;
  for (const SparseEntry& e : features.entries()) {
    z += static_cast<double>(weights_[e.index]) * e.value;
  }
  return sigmoid(z);
}

double MatcherModel::score_pair(std::string_view rt, std::string_view label_name) const {
  return score_features(pair_features(rt, label_name, features_));
}

MatcherValidationSet make_matcher_validation(const std::vector<CodedRecord>& records,
                                             const Scorer& scorer, const Ontology& ontology,
                                             std::size_t n_candidates) {
  MatcherValidationSet set;
  const std::size_t n = std::min(n_candidates, scorer.labels()->size());
  for (const CodedRecord& r : records) {
    MatcherValidationSet::Item item{r.rt, r.llt_code, {}};
    for (const Candidate& c : top_n(scorer.predict_distribution(r.rt), n)) {
      item.candidates.emplace_back(c.llt_code, ontology.at(c.llt_code).llt_name);
    }
    set.items.push_back(std::move(item));
  }
  return set;
}

namespace {

struct PreparedExample {
  std::string record_id;
  FeatureVector features;
  bool label;
};

std::vector<PreparedExample> prepare(const std::vector<MatchExample>& examples,
                                     const PairFeaturizerConfig& config,
                                     const std::unordered_set<std::string>& exclude) {
  std::vector<PreparedExample> out;
  out.reserve(examples.size());
  for (const MatchExample& ex : examples) {
    if (exclude.contains(ex.record_id)) continue;
    out.push_back({ex.record_id, pair_features(ex.rt, ex.label_name, config), ex.is_match});
  }
  return out;
}

double candidate_accuracy(const std::vector<float>& weights, float bias,
                          const MatcherValidationSet& validation,
                          const std::vector<std::vector<FeatureVector>>& features) {
  if (validation.items.empty()) return 0.0;
  std::size_t correct = 0;
  for (std::size_t i = 0; i < validation.items.size(); ++i) {
    const auto& item = validation.items[i];
    double best = -1;
    std::size_t best_j = 0;
    for (std::size_t j = 0; j < item.candidates.size(); ++j) {
      double z = bias;
      for (const SparseEntry& e : features[i][j].entries()) z += weights[e.index] * e.value;
      if (z > best || j == 0) {
        best = z;
        best_j = j;
      }
    }
    if (!item.candidates.empty() && item.candidates[best_j].first == item.gold) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(validation.items.size());
}

// Fraction of held-out records whose positive outscores all their negatives.
double ranking_accuracy(const std::vector<float>& weights, float bias,
                        const std::vector<PreparedExample>& held_out) {
  std::unordered_map<std::string, std::pair<double, double>> by_record;  // pos, max neg
  for (const PreparedExample& ex : held_out) {
    double z = bias;
    for (const SparseEntry& e : ex.features.entries()) z += weights[e.index] * e.value;
    auto [it, inserted] = by_record.try_emplace(ex.record_id, -INFINITY, -INFINITY);
    if (ex.label) {
      it->second.first = z;
    } else {
      it->second.second = std::max(it->second.second, z);
    }
  }
  if (by_record.empty()) return 0.0;
  std::size_t correct = 0;
  for (const auto& [id, s] : by_record) {
    if (s.first > s.second) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(by_record.size());
}

}  // namespace

MatcherModel train_matcher(const ExampleSource& source, const MatcherHparams& hparams,
                           std::uint64_t seed, const MatcherValidationSet* validation) {
  require(hparams.epochs >= 1 && hparams.batch_size >= 1 && hparams.learning_rate > 0,
          "train_matcher: epochs, batch_size and learning_rate must be positive");
  const std::size_t d = hparams.features.text.dim;
  std::vector<MatchExample> first = source(1);

  std::unordered_set<std::string> held_out_ids;
  if (validation == nullptr) {
    std::vector<std::string> ids;
    for (const MatchExample& ex : first) ids.push_back(ex.record_id);
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    const std::size_t n_hold = std::min(hparams.validation_records, ids.size() / 10);
    Rng rng(derive_seed(seed, "matcher-holdout"));
    rng.shuffle(std::span(ids));
    held_out_ids.insert(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(n_hold));
  }
  std::vector<PreparedExample> held_out;
  if (!held_out_ids.empty()) {
    std::vector<MatchExample> held;
    for (const MatchExample& ex : first) {
      if (held_out_ids.contains(ex.record_id)) held.push_back(ex);
    }
    held_out = prepare(held, hparams.features, {});
  }
  std::vector<std::vector<FeatureVector>> validation_features;
  if (validation != nullptr) {
    for (const auto& item : validation->items) {
      auto& row = validation_features.emplace_back();
      for (const auto& [code, name] : item.candidates) {
        row.push_back(pair_features(item.rt, name, hparams.features));
      }
    }
  }

  std::vector<float> weights(d, 0.0f), m(d, 0.0f), v(d, 0.0f);
  float bias = 0, bias_m = 0, bias_v = 0;
  std::vector<float> best_weights = weights;
  float best_bias = 0;
  double best_acc = -1;
  MatcherSummary summary;
  summary.seed = seed;

  Rng shuffler(derive_seed(seed, "matcher-shuffle"));
  std::vector<std::int32_t> slot_of(d, -1);
  std::vector<std::uint32_t> touched;
  std::vector<double> grad;
  std::int64_t step = 0;

  for (int epoch = 1; epoch <= hparams.epochs; ++epoch) {
    std::vector<PreparedExample> data =
        prepare(epoch == 1 ? first : source(epoch), hparams.features, held_out_ids);
    if (epoch == 1) {
      const bool has_pos = std::any_of(data.begin(), data.end(), [](auto& e) { return e.label; });
      const bool has_neg = std::any_of(data.begin(), data.end(), [](auto& e) { return !e.label; });
      if (!has_pos || !has_neg) {
        fail(ErrorCode::kInvalidArgument,
             "train_matcher: training pairs must contain both matches and non-matches");
      }
    }
    std::vector<std::size_t> order(data.size());
    std::iota(order.begin(), order.end(), 0);
    shuffler.shuffle(std::span(order));
    for (std::size_t start = 0; start < order.size(); start += hparams.batch_size) {
      const std::size_t end = std::min(order.size(), start + hparams.batch_size);
      const double scale = 1.0 / static_cast<double>(end - start);
      double bias_grad = 0;
      for (std::size_t b = start; b < end; ++b) {
        const PreparedExample& ex = data[order[b]];
        double z = bias;
        for (const SparseEntry& e : ex.features.entries()) z += weights[e.index] * e.value;
        const double dz = scale * (1.0 / (1.0 + std::exp(-z)) - (ex.label ? 1.0 : 0.0));
        bias_grad += dz;
        for (const SparseEntry& e : ex.features.entries()) {
          std::int32_t& slot = slot_of[e.index];
          if (slot < 0) {
            slot = static_cast<std::int32_t>(touched.size());
            touched.push_back(e.index);
            grad.push_back(0.0);
          }
          grad[static_cast<std::size_t>(slot)] += dz * e.value;
        }
      }
      ++step;
      const double bc1 = 1.0 - std::pow(hparams.beta1, static_cast<double>(step));
      const double bc2 = 1.0 - std::pow(hparams.beta2, static_cast<double>(step));
      const double lr = hparams.learning_rate * std::sqrt(bc2) / bc1;
      const double eps = hparams.epsilon * std::sqrt(bc2);
      auto adam = [&](float& w, float& mw, float& vw, double g) {
        mw = static_cast<float>(hparams.beta1 * mw + (1 - hparams.beta1) * g);
        vw = static_cast<float>(hparams.beta2 * vw + (1 - hparams.beta2) * g * g);
        w -= static_cast<float>(lr * mw / (std::sqrt(static_cast<double>(vw)) + eps));
      };
      for (std::size_t s = 0; s < touched.size(); ++s) {
        const std::uint32_t f = touched[s];
        adam(weights[f], m[f], v[f], grad[s]);
        slot_of[f] = -1;
      }
      adam(bias, bias_m, bias_v, bias_grad);
      touched.clear();
      grad.clear();
    }
    double acc;
    if (validation != nullptr) {
      acc = candidate_accuracy(weights, bias, *validation, validation_features);
    } else if (!held_out.empty()) {
      acc = ranking_accuracy(weights, bias, held_out);
    } else {
      acc = 0.0;
    }
    summary.epoch_validation_accuracy.push_back(acc);
    const bool no_signal = validation == nullptr && held_out.empty();
    if (no_signal || acc > best_acc) {
      best_acc = acc;
      best_weights = weights;
      best_bias = bias;
      summary.selected_epoch = epoch;
      summary.validation_accuracy = acc;
    }
  }
  return MatcherModel(hparams.features, std::move(best_weights), best_bias, std::move(summary));
}

MatcherModel train_matcher(const std::vector<MatchExample>& examples,
                           const MatcherHparams& hparams, std::uint64_t seed,
                           const MatcherValidationSet* validation) {
  return train_matcher([&examples](int) { return examples; }, hparams, seed, validation);
}

// ---------------------------------------------------------------------------
// Prediction

XtarsResult xtars_predict(const PredictiveDistribution& dist, const MatcherModel& matcher,
                          const Ontology& ontology, std::string_view rt, std::size_t n) {
  XtarsResult result;
  result.candidates = top_n(dist, n);
  result.match_scores.reserve(result.candidates.size());
  std::size_t best = 0;
  for (std::size_t i = 0; i < result.candidates.size(); ++i) {
    const double s = matcher.score_pair(rt, ontology.at(result.candidates[i].llt_code).llt_name);
    result.match_scores.push_back(s);
    if (s > result.match_scores[best]) best = i;
  }
  result.llt_code = result.candidates[best].llt_code;
  result.match_score = result.match_scores[best];
  return result;
}

XtarsResult xtars_predict(const Scorer& scorer, const MatcherModel& matcher,
                          const Ontology& ontology, std::string_view rt, std::size_t n) {
  return xtars_predict(scorer.predict_distribution(rt), matcher, ontology, rt, n);
}

}  // namespace xtars
