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

#include <cmath>
#include <numeric>
#include <set>

#include <gtest/gtest.h>

#include "test_support.h"
#include "xtars/artifact.h"
#include "xtars/classifier.h"
#include "xtars/error.h"
#include "xtars/rng.h"

namespace xtars {
namespace {

using testing::make_record;

FeatureVector random_sparse(Rng& rng, std::uint32_t dim, std::size_t nnz) {
  FeatureBuilder b(dim);
  for (std::size_t i = 0; i < nnz; ++i) {
    b.add(static_cast<std::uint32_t>(rng.uniform_index(dim)),
          static_cast<float>(2.0 * rng.uniform() - 1.0));
  }
  return b.finish(false);
}

TEST(SoftmaxTest, ShiftInvariant) {
  const std::vector<double> logits = {0.3, -1.2, 2.5, 0.0};
  std::vector<double> shifted = logits;
  for (double& x : shifted) x += 123.456;
  std::vector<double> p(4), q(4);
  softmax(logits, p);
  softmax(shifted, q);
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(p[i], q[i], 1e-9);
  EXPECT_NEAR(std::accumulate(p.begin(), p.end(), 0.0), 1.0, 1e-12);
}

TEST(SoftmaxTest, LargeLogitsStayFinite) {
  std::vector<double> p(3);
  softmax(std::vector<double>{1000.0, 999.0, -1000.0}, p);
  EXPECT_NEAR(p[0], 1.0 / (1.0 + std::exp(-1.0)), 1e-12);
  EXPECT_EQ(p[2], 0.0);
}

// Central differences on a K=4, D=32 instance.
TEST(ClassifierGradientTest, MatchesFiniteDifferences) {
  constexpr std::size_t kLabels = 4;
  constexpr std::uint32_t kDim = 32;
  Rng rng(17);
  std::vector<FeatureVector> batch;
  std::vector<std::size_t> targets;
  for (int i = 0; i < 6; ++i) {
    batch.push_back(random_sparse(rng, kDim, 6));
    targets.push_back(rng.uniform_index(kLabels));
  }
  std::vector<double> w(kDim * kLabels);
  for (double& x : w) x = rng.uniform() - 0.5;
  std::vector<double> grad(w.size());
  softmax_regression_loss(w, kLabels, batch, targets, grad);

  const double h = 1e-5;
  double worst = 0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    std::vector<double> wp = w, wm = w;
    wp[i] += h;
    wm[i] -= h;
    const double numeric = (softmax_regression_loss(wp, kLabels, batch, targets, {}) -
                            softmax_regression_loss(wm, kLabels, batch, targets, {})) /
                           (2 * h);
    const double denom = std::max({std::abs(numeric), std::abs(grad[i]), 1e-8});
    if (std::abs(numeric) < 1e-10 && std::abs(grad[i]) < 1e-10) continue;
    worst = std::max(worst, std::abs(numeric - grad[i]) / denom);
  }
  EXPECT_LT(worst, 1e-4);
}

// With zero initial weights and one full batch, the first Adam step moves
// every touched weight by -lr * g / (|g| + eps), i.e. -lr * sign(g). This ties the trainer's
// update to the gradient-checked objective.
TEST(ClassifierGradientTest, TrainerStepFollowsObjectiveGradient) {
  const std::vector<CodedRecord> train = {
      make_record("1", "leg pain", "A"), make_record("2", "gangrene toe", "B"),
      make_record("3", "lethargy", "C"), make_record("4", "leg ache", "A")};
  ClassifierHparams hp;
  hp.featurizer.dim = 64;
  hp.epochs = 1;
  hp.batch_size = train.size();
  hp.learning_rate = 1e-3;
  hp.init_scale = 0;
  const TrainedClassifier model = train_classifier(train, {}, hp, 1);

  const std::size_t k = model.num_labels();
  std::vector<FeatureVector> batch;
  std::vector<std::size_t> targets;
  for (const auto& r : train) {
    batch.push_back(featurize(r.rt, hp.featurizer));
    targets.push_back(model.labels()->index_of(r.llt_code));
  }
  std::vector<double> zero(hp.featurizer.dim * k, 0.0), grad(zero.size());
  softmax_regression_loss(zero, k, batch, targets, grad);
  for (std::size_t i = 0; i < grad.size(); ++i) {
    const double expected = -hp.learning_rate * grad[i] / (std::abs(grad[i]) + hp.epsilon);
    EXPECT_NEAR(model.weights()[i], expected, 1e-6) << "weight " << i;
  }
}

TEST(ClassifierTrainingTest, ToySetIsLearned) {
  const std::vector<CodedRecord> train = {make_record("1", "aaa", "A"),
                                          make_record("2", "bbb", "B"),
                                          make_record("3", "ccc", "C")};
  ClassifierHparams hp;
  hp.featurizer.dim = 1u << 10;
  hp.epochs = 20;
  hp.batch_size = 2;
  const TrainedClassifier model = train_classifier(train, train, hp, 5);
  EXPECT_DOUBLE_EQ(top1_accuracy(model, train), 1.0);
}

TEST(ClassifierTrainingTest, SameSeedSameWeights) {
  const Ontology ont = generate_synthetic_ontology(30, 10, 1);
  std::vector<CodedRecord> train;
  for (const LltEntry& e : ont.entries()) {
    train.push_back(make_record(e.llt_code, e.llt_name, e.llt_code));
  }
  ClassifierHparams hp;
  hp.featurizer.dim = 1u << 10;
  hp.epochs = 3;
  const TrainedClassifier a = train_classifier(train, train, hp, 9);
  const TrainedClassifier b = train_classifier(train, train, hp, 9);
  const TrainedClassifier c = train_classifier(train, train, hp, 10);
  EXPECT_TRUE(std::equal(a.weights().begin(), a.weights().end(), b.weights().begin()));
  EXPECT_FALSE(std::equal(a.weights().begin(), a.weights().end(), c.weights().begin()));
}

TEST(ClassifierTrainingTest, SelectedEpochIsBestOnValidation) {
  const Ontology ont = generate_synthetic_ontology(40, 12, 3);
  std::vector<CodedRecord> train, val;
  for (const LltEntry& e : ont.entries()) {
    train.push_back(make_record(e.llt_code, e.llt_name, e.llt_code));
    val.push_back(make_record("v" + e.llt_code, "the " + e.llt_name, e.llt_code));
  }
  ClassifierHparams hp;
  hp.featurizer.dim = 1u << 10;
  hp.epochs = 6;
  const TrainedClassifier m = train_classifier(train, val, hp, 2);
  const auto& s = m.summary();
  ASSERT_EQ(s.epoch_validation_accuracy.size(), 6u);
  EXPECT_GE(s.validation_accuracy, s.epoch_validation_accuracy.front());
  EXPECT_DOUBLE_EQ(s.validation_accuracy,
                   *std::max_element(s.epoch_validation_accuracy.begin(),
                                     s.epoch_validation_accuracy.end()));
  EXPECT_DOUBLE_EQ(top1_accuracy(m, val), s.validation_accuracy);
}

TEST(ClassifierTrainingTest, ErrorCases) {
  ClassifierHparams hp;
  hp.featurizer.dim = 64;
  EXPECT_THROW(train_classifier({}, {}, hp, 1), Error);
  EXPECT_THROW(train_classifier({make_record("1", "aaa", "A")}, {make_record("2", "bbb", "Z")},
                                hp, 1),
               Error);
}

TEST(PredictTest, ZeroWeightsGiveUniform) {
  auto labels = std::make_shared<const LabelIndex>(std::vector<std::string>{"A", "B", "C", "D"});
  FeaturizerConfig f;
  f.dim = 64;
  const TrainedClassifier model(f, labels, std::vector<float>(64 * 4, 0.0f), {});
  const PredictiveDistribution d = model.predict_distribution("anything");
  for (double p : d.probabilities) EXPECT_NEAR(p, 0.25, 1e-12);
  EXPECT_THROW(model.predict_distribution(" "), Error);
}

TEST(TopNTest, OrdersByProbability) {
  auto labels = std::make_shared<const LabelIndex>(std::vector<std::string>{"a", "b", "c"});
  const PredictiveDistribution d{labels, {0.5, 0.3, 0.2}};
  const CandidateSet top = top_n(d, 2);
  ASSERT_EQ(top.size(), 2u);
  EXPECT_EQ(top[0].llt_code, "a");
  EXPECT_EQ(top[1].llt_code, "b");
  EXPECT_EQ(top_n(d, 3).size(), 3u);
  EXPECT_THROW(top_n(d, 0), Error);
  EXPECT_THROW(top_n(d, 4), Error);
}

TEST(TopNTest, UniformTiesGoToSmallestCodes) {
  auto labels = std::make_shared<const LabelIndex>(
      std::vector<std::string>{"llt9", "llt1", "llt5", "llt3"});
  const PredictiveDistribution d{labels, {0.25, 0.25, 0.25, 0.25}};
  const CandidateSet top = top_n(d, 3);
  EXPECT_EQ(top[0].llt_code, "llt1");
  EXPECT_EQ(top[1].llt_code, "llt3");
  EXPECT_EQ(top[2].llt_code, "llt5");
}

TEST(TopNTest, ProbabilitiesNonIncreasingAndFullRankingHasRecallOne) {
  Rng rng(4);
  std::vector<std::string> codes;
  for (int i = 0; i < 50; ++i) codes.push_back("c" + std::to_string(100 + i));
  auto labels = std::make_shared<const LabelIndex>(codes);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> logits(50), p(50);
    for (double& x : logits) x = 3 * rng.uniform();
    softmax(logits, p);
    const CandidateSet all = top_n({labels, p}, 50);
    for (std::size_t i = 1; i < all.size(); ++i) {
      EXPECT_GE(all[i - 1].probability, all[i].probability);
    }
    std::set<std::string> seen;
    for (const auto& c : all) seen.insert(c.llt_code);
    EXPECT_EQ(seen.size(), 50u);
  }
}

TEST(ClassifierIoTest, RoundTripAndTamperDetection) {
  testing::TempDir dir;
  const std::vector<CodedRecord> train = {make_record("1", "aaa", "A"),
                                          make_record("2", "bbb", "B")};
  ClassifierHparams hp;
  hp.featurizer.dim = 128;
  hp.epochs = 2;
  const TrainedClassifier m = train_classifier(train, {}, hp, 3);
  save_classifier(dir.path(), m);
  const TrainedClassifier back = load_classifier(dir.path());
  EXPECT_TRUE(std::equal(m.weights().begin(), m.weights().end(), back.weights().begin()));
  EXPECT_EQ(back.labels()->version(), m.labels()->version());
  EXPECT_EQ(testing::read_file(dir.file("labels.csv")), "index,llt_code\n0,A\n1,B\n");
  // K x D header.
  const Matrix raw = read_matrix(dir.file("weights.bin"));
  EXPECT_EQ(raw.rows, 2u);
  EXPECT_EQ(raw.cols, 128u);
  EXPECT_EQ(raw.values[1 * 128 + 7], m.weight(1, 7));

  std::string bytes = testing::read_file(dir.file("weights.bin"));
  bytes[bytes.size() - 1] ^= 0x01;
  write_text_file(dir.file("weights.bin"), bytes);
  EXPECT_THROW(load_classifier(dir.path()), Error);
}

}  // namespace
}  // namespace xtars
