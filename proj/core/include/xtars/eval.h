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

#ifndef XTARS_EVAL_H_
#define XTARS_EVAL_H_

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "json.hpp"
#include "xtars/ensemble.h"
#include "xtars/ontology.h"

namespace xtars {

struct Prediction {
  std::string record_id;
  std::string llt_code;
  double confidence = 0;  // in [0, 1]
  double entropy = 0;
  std::string model_tag;
};

// record id -> gold llt_code
using GoldLabels = std::unordered_map<std::string, std::string>;

// Counts behind one report cell. Accuracies are empty for an empty cell.
struct AccuracyCell {
  std::size_t count = 0;
  std::size_t llt_correct = 0;
  std::size_t pt_correct = 0;

  std::optional<double> llt_accuracy() const;
  std::optional<double> pt_accuracy() const;
  void add(bool llt_hit, bool pt_hit);
};

// LLT hit: predicted code == gold code. PT hit: same PT. Throws LookupError
// for a prediction whose record id has no gold label, or codes outside the
// ontology.
AccuracyCell accuracy(std::span<const Prediction> predictions, const GoldLabels& gold,
                      const Ontology& ontology);

struct BracketReport {
  BracketFractions fractions;
  AccuracyCell all;
  AccuracyCell top;
  AccuracyCell bottom;
  AccuracyCell bottom_tail;
};

// Throws when a prediction id is not covered by the partition.
BracketReport bracket_report(std::span<const Prediction> predictions, const GoldLabels& gold,
                             const BracketPartition& partition, const Ontology& ontology);

// Bins by the gold class's raw training count k: exact bins 0, 1, 2, 3, 5,
// 10, a ">=100" bin, and "other" for every remaining k, so counts total N.
struct FrequencyReport {
  std::vector<std::pair<std::string, AccuracyCell>> bins;
};

std::string frequency_bin(std::size_t k);

FrequencyReport frequency_report(std::span<const Prediction> predictions,
                                 const GoldLabels& gold,
                                 const std::map<std::string, std::size_t>& class_counts,
                                 const Ontology& ontology);

struct BacktestResult {
  double threshold = 0;
  std::size_t total = 0;
  std::size_t covered = 0;
  double coverage = 0;
  // Empty when nothing is covered.
  std::optional<double> llt_accuracy;
  std::optional<double> pt_accuracy;
};

// Coverage = share of predictions with confidence >= threshold; accuracy is
// measured on covered predictions only.
BacktestResult backtest(std::span<const Prediction> predictions, const GoldLabels& gold,
                        double threshold, const Ontology& ontology);

struct EvalReport {
  std::string model_tag;
  std::optional<BracketReport> brackets;
  std::optional<FrequencyReport> frequency;
  std::vector<BacktestResult> backtests;
  // Candidate recall@n of the scorer, when measured.
  std::optional<double> candidate_recall;
  std::size_t candidate_n = 0;
};

nlohmann::ordered_json to_json(const AccuracyCell& cell);
nlohmann::ordered_json to_json(const EvalReport& report);

// Aligned plain-text tables. Rows are models; table2 columns are
// All / top / btm / btm-tail for LLT and PT accuracy (percent).
std::string render_table2(std::span<const EvalReport> rows);
std::string render_table_a1(std::span<const EvalReport> rows);
std::string render_backtest(std::span<const EvalReport> rows);

// Mean and sample standard deviation of a cell's accuracy across runs.
struct CellStats {
  std::size_t runs = 0;
  double mean = 0;
  double stddev = 0;
};
CellStats llt_stats(std::span<const AccuracyCell> cells);
CellStats pt_stats(std::span<const AccuracyCell> cells);

// Table 2 layout with "mean±sd" cells over repeated runs of each row.
std::string render_table2_runs(const std::vector<std::string>& tags,
                               const std::vector<std::vector<BracketReport>>& runs);

}  // namespace xtars

#endif  // XTARS_EVAL_H_
