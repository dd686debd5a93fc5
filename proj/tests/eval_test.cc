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

#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "test_support.h"
#include "xtars/ensemble.h"
#include "xtars/error.h"
#include "xtars/eval.h"
#include "xtars/rng.h"

namespace xtars {
namespace {

Prediction pred(std::string id, std::string code, double confidence = 1.0,
                double entropy = 0.0) {
  return {std::move(id), std::move(code), confidence, entropy, "m"};
}

class EvalTest : public ::testing::Test {
 protected:
  Ontology ont = testing::clinical_ontology();
};

TEST_F(EvalTest, AllCorrectIsPerfect) {
  const GoldLabels gold = {{"r1", "llt001"}, {"r2", "llt004"}};
  const std::vector<Prediction> p = {pred("r1", "llt001"), pred("r2", "llt004")};
  const AccuracyCell c = accuracy(p, gold, ont);
  EXPECT_EQ(c.count, 2u);
  EXPECT_EQ(*c.llt_accuracy(), 1.0);
  EXPECT_EQ(*c.pt_accuracy(), 1.0);
}

TEST_F(EvalTest, RenalConfusionMissesBothLevels) {
  // renal function aggravated (renal impairment) vs acute oliguric renal
  // failure (acute kidney injury).
  const GoldLabels gold = {{"r1", "llt002"}};
  const AccuracyCell c = accuracy(std::vector<Prediction>{pred("r1", "llt003")}, gold, ont);
  EXPECT_EQ(*c.llt_accuracy(), 0.0);
  EXPECT_EQ(*c.pt_accuracy(), 0.0);
}

TEST_F(EvalTest, SiblingLltCountsAtPtLevelOnly) {
  const GoldLabels gold = {{"r1", "llt005"}, {"r2", "llt004"}};
  const AccuracyCell c =
      accuracy(std::vector<Prediction>{pred("r1", "llt006"), pred("r2", "llt004")}, gold, ont);
  EXPECT_EQ(c.llt_correct, 1u);
  EXPECT_EQ(c.pt_correct, 2u);
}

TEST_F(EvalTest, UnknownRecordIsLookupError) {
  const GoldLabels gold = {{"r1", "llt001"}};
  EXPECT_THROW(accuracy(std::vector<Prediction>{pred("zz", "llt001")}, gold, ont), LookupError);
}

TEST_F(EvalTest, EmptyCellIsNotZero) {
  const AccuracyCell empty;
  EXPECT_FALSE(empty.llt_accuracy().has_value());
  EXPECT_FALSE(empty.pt_accuracy().has_value());
  EXPECT_TRUE(to_json(empty)["llt_accuracy"].is_null());
}

TEST_F(EvalTest, BracketCellsFollowPartition) {
  GoldLabels gold;
  std::vector<Prediction> p;
  std::vector<std::string> ids;
  std::vector<double> entropies;
  for (int i = 0; i < 10; ++i) {
    const std::string id = "r" + std::to_string(i);
    gold[id] = "llt001";
    // The four most uncertain records are wrong.
    p.push_back(pred(id, i >= 6 ? "llt002" : "llt001", 1.0, 0.1 * i));
    ids.push_back(id);
    entropies.push_back(0.1 * i);
  }
  const BracketPartition part = bracket_partition(ids, entropies);
  const BracketReport r = bracket_report(p, gold, part, ont);
  EXPECT_EQ(r.all.count, 10u);
  EXPECT_EQ(r.top.count, 8u);
  EXPECT_EQ(r.bottom.count, 5u);
  EXPECT_EQ(r.bottom_tail.count, 2u);
  EXPECT_DOUBLE_EQ(*r.all.llt_accuracy(), 0.6);
  EXPECT_DOUBLE_EQ(*r.top.llt_accuracy(), 6.0 / 8.0);
  EXPECT_DOUBLE_EQ(*r.bottom.llt_accuracy(), 1.0 / 5.0);
  EXPECT_DOUBLE_EQ(*r.bottom_tail.llt_accuracy(), 0.0);
}

TEST_F(EvalTest, TinyBracketIsEmpty) {
  const GoldLabels gold = {{"a", "llt001"}, {"b", "llt001"}, {"c", "llt001"}};
  const std::vector<Prediction> p = {pred("a", "llt001"), pred("b", "llt001"),
                                     pred("c", "llt001")};
  const std::vector<std::string> ids = {"a", "b", "c"};
  const std::vector<double> h = {0.1, 0.2, 0.3};
  const BracketReport r = bracket_report(p, gold, bracket_partition(ids, h), ont);
  EXPECT_EQ(r.bottom_tail.count, 0u);
  EXPECT_FALSE(r.bottom_tail.llt_accuracy().has_value());
  EXPECT_EQ(*r.top.llt_accuracy(), 1.0);
  EXPECT_EQ(*r.bottom.llt_accuracy(), 1.0);
}

TEST_F(EvalTest, PredictionOutsidePartitionIsError) {
  const GoldLabels gold = {{"a", "llt001"}, {"b", "llt001"}};
  const std::vector<std::string> ids = {"a"};
  const std::vector<double> h = {0.1};
  EXPECT_THROW(bracket_report(std::vector<Prediction>{pred("b", "llt001")}, gold,
                              bracket_partition(ids, h), ont),
               Error);
}

TEST_F(EvalTest, FrequencyBins) {
  EXPECT_EQ(frequency_bin(0), "0");
  EXPECT_EQ(frequency_bin(5), "5");
  EXPECT_EQ(frequency_bin(4), "other");
  EXPECT_EQ(frequency_bin(99), "other");
  EXPECT_EQ(frequency_bin(100), ">=100");
  EXPECT_EQ(frequency_bin(250), ">=100");

  const GoldLabels gold = {{"a", "llt001"}, {"b", "llt002"}, {"c", "llt003"}, {"d", "llt004"}};
  const std::map<std::string, std::size_t> counts = {{"llt002", 5}, {"llt003", 250}, {"llt004", 7}};
  const std::vector<Prediction> p = {pred("a", "llt001"), pred("b", "llt002"),
                                     pred("c", "llt001"), pred("d", "llt004")};
  const FrequencyReport r = frequency_report(p, gold, counts, ont);
  std::map<std::string, AccuracyCell> by_bin(r.bins.begin(), r.bins.end());
  EXPECT_EQ(by_bin["0"].count, 1u);
  EXPECT_EQ(by_bin["5"].count, 1u);
  EXPECT_EQ(by_bin[">=100"].count, 1u);
  EXPECT_EQ(by_bin[">=100"].llt_correct, 0u);
  EXPECT_EQ(by_bin["other"].count, 1u);
  std::size_t total = 0;
  for (const auto& [name, cell] : r.bins) total += cell.count;
  EXPECT_EQ(total, p.size());
}

TEST_F(EvalTest, BacktestCoverage) {
  const GoldLabels gold = {{"a", "llt001"}, {"b", "llt002"}, {"c", "llt003"}};
  const std::vector<Prediction> p = {pred("a", "llt001", 0.9), pred("b", "llt003", 0.8),
                                     pred("c", "llt003", 0.1)};
  const BacktestResult half = backtest(p, gold, 0.5, ont);
  EXPECT_EQ(half.covered, 2u);
  EXPECT_DOUBLE_EQ(half.coverage, 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(*half.llt_accuracy, 0.5);

  const BacktestResult all = backtest(p, gold, 0.0, ont);
  EXPECT_DOUBLE_EQ(all.coverage, 1.0);
  EXPECT_DOUBLE_EQ(*all.llt_accuracy, *accuracy(p, gold, ont).llt_accuracy());

  const BacktestResult none = backtest(p, gold, 1.01, ont);
  EXPECT_EQ(none.coverage, 0.0);
  EXPECT_FALSE(none.llt_accuracy.has_value());
}

TEST_F(EvalTest, RandomReportsKeepInvariants) {
  Rng rng(31);
  const std::vector<std::string> codes = {"llt001", "llt002", "llt003", "llt004",
                                          "llt005", "llt006", "llt007", "llt008"};
  for (int trial = 0; trial < 30; ++trial) {
    GoldLabels gold;
    std::vector<Prediction> p;
    std::vector<std::string> ids;
    std::vector<double> h;
    const std::size_t n = 1 + rng.uniform_index(60);
    for (std::size_t i = 0; i < n; ++i) {
      const std::string id = "r" + std::to_string(i);
      gold[id] = codes[rng.uniform_index(codes.size())];
      p.push_back(pred(id, codes[rng.uniform_index(codes.size())], rng.uniform(), rng.uniform()));
      ids.push_back(id);
      h.push_back(p.back().entropy);
    }
    const BracketPartition part = bracket_partition(ids, h);
    const BracketReport r = bracket_report(p, gold, part, ont);
    std::size_t top50 = 0;
    for (std::size_t i = 0; i < n; ++i) top50 += part.bottom[i] ? 0 : 1;
    EXPECT_EQ(r.bottom.count + top50, n);
    for (const AccuracyCell* c : {&r.all, &r.top, &r.bottom, &r.bottom_tail}) {
      EXPECT_GE(c->pt_correct, c->llt_correct);
    }
    double prev = 1.1;
    for (double t = 0.0; t <= 1.0; t += 0.05) {
      const double cov = backtest(p, gold, t, ont).coverage;
      EXPECT_LE(cov, prev);
      prev = cov;
    }
  }
}

TEST_F(EvalTest, JsonAndTablesAreStable) {
  const GoldLabels gold = {{"a", "llt001"}, {"b", "llt002"}, {"c", "llt003"}, {"d", "llt007"}};
  const std::vector<Prediction> p = {pred("a", "llt001", 0.9, 0.1), pred("b", "llt003", 0.8, 0.7),
                                     pred("c", "llt003", 0.1, 0.3), pred("d", "llt008", 0.6, 0.2)};
  const std::vector<std::string> ids = {"a", "b", "c", "d"};
  const std::vector<double> h = {0.1, 0.7, 0.3, 0.2};
  auto make = [&] {
    EvalReport r;
    r.model_tag = "ensemble";
    r.brackets = bracket_report(p, gold, bracket_partition(ids, h), ont);
    r.frequency = frequency_report(p, gold, {{"llt001", 3}}, ont);
    r.backtests.push_back(backtest(p, gold, 0.5, ont));
    return r;
  };
  const EvalReport a = make();
  const EvalReport b = make();
  EXPECT_EQ(to_json(a).dump(2), to_json(b).dump(2));
  const auto j = to_json(a);
  EXPECT_TRUE(j["table2"].contains("all"));
  EXPECT_TRUE(j["table2"].contains("top-80%"));
  EXPECT_TRUE(j["table2"].contains("btm-50%"));
  EXPECT_TRUE(j["table2"].contains("btm-25%"));
  const std::vector<EvalReport> rows = {a};
  const std::string t2 = render_table2(rows);
  EXPECT_NE(t2.find("ensemble"), std::string::npos);
  EXPECT_NE(t2.find("btm-25%"), std::string::npos);
  EXPECT_EQ(t2, render_table2(std::vector<EvalReport>{b}));
  EXPECT_NE(render_table_a1(rows).find("k>=100"), std::string::npos);
  EXPECT_NE(render_backtest(rows).find("0.5"), std::string::npos);
}

TEST_F(EvalTest, RunStatistics) {
  AccuracyCell a, b, c;
  for (int i = 0; i < 10; ++i) {
    a.add(i < 5, true);
    b.add(i < 6, true);
    c.add(i < 7, true);
  }
  const std::vector<AccuracyCell> cells = {a, b, c};
  const CellStats s = llt_stats(cells);
  EXPECT_EQ(s.runs, 3u);
  EXPECT_NEAR(s.mean, 0.6, 1e-12);
  EXPECT_NEAR(s.stddev, 0.1, 1e-12);  // sample standard deviation
  EXPECT_NEAR(pt_stats(cells).mean, 1.0, 1e-12);
}

}  // namespace
}  // namespace xtars
