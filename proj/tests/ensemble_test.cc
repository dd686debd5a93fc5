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

#include <algorithm>
#include <cmath>
#include <numeric>

#include <gtest/gtest.h>

#include "test_support.h"
#include "xtars/ensemble.h"
#include "xtars/error.h"
#include "xtars/rng.h"

namespace xtars {
namespace {

using testing::make_record;

std::vector<CodedRecord> toy_train() {
  const Ontology ont = generate_synthetic_ontology(20, 8, 2);
  std::vector<CodedRecord> out;
  for (const LltEntry& e : ont.entries()) {
    out.push_back(make_record(e.llt_code, e.llt_name, e.llt_code));
    out.push_back(make_record(e.llt_code + "b", "patient has " + e.llt_name, e.llt_code));
  }
  return out;
}

ClassifierHparams small_hparams() {
  ClassifierHparams hp;
  hp.featurizer.dim = 1u << 10;
  hp.epochs = 3;
  return hp;
}

std::vector<double> random_distribution(Rng& rng, std::size_t k) {
  std::vector<double> p(k);
  for (double& x : p) x = -std::log(1.0 - rng.uniform());
  const double sum = std::accumulate(p.begin(), p.end(), 0.0);
  for (double& x : p) x /= sum;
  return p;
}

TEST(EntropyTest, ClosedForms) {
  EXPECT_NEAR(predictive_entropy(std::vector<double>{1, 0, 0}), 0.0, 1e-12);
  EXPECT_NEAR(predictive_entropy(std::vector<double>{0.25, 0.25, 0.25, 0.25}), 1.386294, 1e-6);
  EXPECT_NEAR(predictive_entropy(std::vector<double>{0.5, 0.5}), 0.693147, 1e-6);
  for (std::size_t k : {2u, 10u, 10000u}) {
    std::vector<double> u(k, 1.0 / static_cast<double>(k));
    EXPECT_NEAR(predictive_entropy(u), std::log(static_cast<double>(k)), 1e-9);
  }
}

TEST(EntropyTest, BoundedByLogK) {
  Rng rng(8);
  for (int i = 0; i < 200; ++i) {
    const std::size_t k = 2 + rng.uniform_index(30);
    const double h = predictive_entropy(random_distribution(rng, k));
    EXPECT_GE(h, 0.0);
    EXPECT_LE(h, std::log(static_cast<double>(k)) + 1e-12);
  }
}

TEST(MeanDistributionTest, ArithmeticMean) {
  auto labels = std::make_shared<const LabelIndex>(std::vector<std::string>{"A", "B"});
  const std::vector<PredictiveDistribution> members = {{labels, {0.6, 0.4}},
                                                       {labels, {0.2, 0.8}}};
  const auto mean = mean_distribution(members);
  EXPECT_NEAR(mean.probabilities[0], 0.4, 1e-12);
  EXPECT_NEAR(mean.probabilities[1], 0.6, 1e-12);
}

TEST(MeanDistributionTest, PermutationInvariantBitExact) {
  Rng rng(12);
  auto labels = std::make_shared<const LabelIndex>(
      std::vector<std::string>{"a", "b", "c", "d", "e", "f", "g"});
  std::vector<PredictiveDistribution> members;
  for (int i = 0; i < 5; ++i) members.push_back({labels, random_distribution(rng, 7)});
  const auto ref = mean_distribution(members);
  EXPECT_NEAR(std::accumulate(ref.probabilities.begin(), ref.probabilities.end(), 0.0), 1.0, 1e-6);
  std::vector<int> order = {0, 1, 2, 3, 4};
  while (std::next_permutation(order.begin(), order.end())) {
    std::vector<PredictiveDistribution> permuted;
    for (int i : order) permuted.push_back(members[i]);
    EXPECT_EQ(mean_distribution(permuted).probabilities, ref.probabilities);
  }
}

// Concavity of entropy: H(mean) >= mean of H.
TEST(MeanDistributionTest, EntropyOfMeanDominatesMeanEntropy) {
  Rng rng(21);
  auto labels = std::make_shared<const LabelIndex>(
      std::vector<std::string>{"a", "b", "c", "d", "e"});
  for (int i = 0; i < 1000; ++i) {
    const std::vector<PredictiveDistribution> pair = {{labels, random_distribution(rng, 5)},
                                                      {labels, random_distribution(rng, 5)}};
    const double h_mean = predictive_entropy(mean_distribution(pair));
    const double mean_h =
        0.5 * (predictive_entropy(pair[0]) + predictive_entropy(pair[1]));
    EXPECT_GE(h_mean, mean_h - 1e-9);
  }
}

TEST(EnsembleTest, MembersReproducibleStandalone) {
  const auto train = toy_train();
  const Ensemble ens = train_ensemble(train, train, small_hparams(), {1, 2, 3});
  ASSERT_EQ(ens.members().size(), 3u);
  const TrainedClassifier solo = train_classifier(train, train, small_hparams(), 2);
  const auto& w = ens.members()[1]->weights();
  EXPECT_TRUE(std::equal(w.begin(), w.end(), solo.weights().begin()));
  EXPECT_EQ(ens.seeds(), (std::vector<std::uint64_t>{1, 2, 3}));
}

TEST(EnsembleTest, SingleMemberMatchesMember) {
  const auto train = toy_train();
  const Ensemble ens = train_ensemble(train, {}, small_hparams(), {4});
  const auto a = ens.predict_distribution("leg pain");
  const auto b = ens.members()[0]->predict_distribution("leg pain");
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_NEAR(a.probabilities[i], b.probabilities[i], 1e-15);
  }
}

TEST(EnsembleTest, DuplicateOrEmptySeedsRejected) {
  const auto train = toy_train();
  EXPECT_THROW(train_ensemble(train, {}, small_hparams(), {1, 1}), Error);
  EXPECT_THROW(train_ensemble(train, {}, small_hparams(), {}), Error);
}

TEST(EnsembleTest, MismatchedLabelIndexRejected) {
  const auto a = std::make_shared<const TrainedClassifier>(
      train_classifier({make_record("1", "aaa", "A"), make_record("2", "bbb", "B")}, {},
                       small_hparams(), 1));
  const auto b = std::make_shared<const TrainedClassifier>(
      train_classifier({make_record("1", "aaa", "A"), make_record("2", "bbb", "C")}, {},
                       small_hparams(), 2));
  EXPECT_THROW(Ensemble({a, b}), Error);
}

TEST(EnsembleTest, SaveLoadRoundTrip) {
  testing::TempDir dir;
  const auto train = toy_train();
  const Ensemble ens = train_ensemble(train, {}, small_hparams(), {5, 6});
  save_ensemble(dir.path(), ens);
  const Ensemble back = load_ensemble(dir.path());
  EXPECT_EQ(back.seeds(), ens.seeds());
  EXPECT_EQ(back.predict_distribution("gangrene").probabilities,
            ens.predict_distribution("gangrene").probabilities);
}

std::vector<std::string> ids(std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back("r" + std::to_string(100 + i));
  return out;
}

std::size_t count(const std::vector<bool>& v) {
  return static_cast<std::size_t>(std::count(v.begin(), v.end(), true));
}

TEST(BracketTest, FloorSizesForTen) {
  const std::vector<double> h = {0.1, 0.9, 0.5, 0.3, 0.7, 0.2, 0.8, 0.4, 0.6, 1.0};
  const auto p = bracket_partition(ids(10), h);
  EXPECT_EQ(count(p.top), 8u);
  EXPECT_EQ(count(p.bottom), 5u);
  EXPECT_EQ(count(p.bottom_tail), 2u);
  // The two highest entropies (1.0 at index 9, 0.9 at index 1) form the tail.
  EXPECT_TRUE(p.bottom_tail[9]);
  EXPECT_TRUE(p.bottom_tail[1]);
  EXPECT_FALSE(p.top[9]);
  EXPECT_TRUE(p.top[0]);
}

TEST(BracketTest, EqualEntropiesSplitById) {
  const auto p = bracket_partition(ids(10), std::vector<double>(10, 0.5));
  EXPECT_EQ(count(p.top), 8u);
  for (std::size_t i = 0; i < 8; ++i) EXPECT_TRUE(p.top[i]);
  EXPECT_TRUE(p.bottom_tail[8]);
  EXPECT_TRUE(p.bottom_tail[9]);
}

TEST(BracketTest, FullCorpusSizes) {
  Rng rng(1);
  std::vector<double> h(8575);
  for (double& x : h) x = rng.uniform();
  const auto p = bracket_partition(ids(8575), h);
  EXPECT_EQ(count(p.top), 6860u);
  EXPECT_EQ(count(p.bottom), 4287u);
  EXPECT_EQ(count(p.bottom_tail), 2143u);
}

TEST(BracketTest, NestingProperty) {
  Rng rng(3);
  for (std::size_t n = 1; n < 60; ++n) {
    std::vector<double> h(n);
    for (double& x : h) x = std::floor(rng.uniform() * 5);
    const auto p = bracket_partition(ids(n), h);
    EXPECT_EQ(count(p.top), static_cast<std::size_t>(0.8 * n + 1e-9));
    EXPECT_EQ(count(p.bottom), n / 2);
    EXPECT_EQ(count(p.bottom_tail), n / 4);
    double max_top = -1, min_rest = 1e9;
    for (std::size_t i = 0; i < n; ++i) {
      if (p.bottom_tail[i]) { EXPECT_TRUE(p.bottom[i]); }
      if (p.top[i]) max_top = std::max(max_top, h[i]);
      else min_rest = std::min(min_rest, h[i]);
    }
    EXPECT_LE(max_top, min_rest);
  }
}

TEST(BracketTest, MismatchedInputsRejected) {
  EXPECT_THROW(bracket_partition(ids(3), std::vector<double>{0.1}), Error);
  EXPECT_THROW(bracket_partition({}, std::vector<double>{}), Error);
}

}  // namespace
}  // namespace xtars
