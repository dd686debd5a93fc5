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

#include "xtars/eval.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "xtars/error.h"

namespace xtars {

std::optional<double> AccuracyCell::llt_accuracy() const {
  if (count == 0) return std::nullopt;
  return static_cast<double>(llt_correct) / static_cast<double>(count);
}

std::optional<double> AccuracyCell::pt_accuracy() const {
  if (count == 0) return std::nullopt;
  return static_cast<double>(pt_correct) / static_cast<double>(count);
}

void AccuracyCell::add(bool llt_hit, bool pt_hit) {
  ++count;
  llt_correct += llt_hit ? 1 : 0;
  pt_correct += pt_hit ? 1 : 0;
}

namespace {

struct Hit {
  bool llt;
  bool pt;
};

Hit score_one(const Prediction& p, const GoldLabels& gold, const Ontology& ontology) {
  auto it = gold.find(p.record_id);
  if (it == gold.end()) {
    throw LookupError("prediction for unknown record id '" + p.record_id + "'");
  }
  const bool llt = p.llt_code == it->second;
  const bool pt = ontology.pt_of(p.llt_code).code == ontology.pt_of(it->second).code;
  return {llt, pt};
}

std::string percent(std::optional<double> v) {
  if (!v) return "-";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.1f", 100.0 * *v);
  return buf;
}

std::string bracket_label(const char* side, double fraction) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%s-%g%%", side, 100.0 * fraction);
  return buf;
}

// Renders rows of cells with column widths fitted to the content.
std::string render_grid(const std::vector<std::vector<std::string>>& grid) {
  std::vector<std::size_t> width;
  for (const auto& row : grid) {
    if (width.size() < row.size()) width.resize(row.size(), 0);
    for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
  }
  std::ostringstream out;
  for (std::size_t r = 0; r < grid.size(); ++r) {
    for (std::size_t c = 0; c < grid[r].size(); ++c) {
      const std::string& cell = grid[r][c];
      if (c == 0) {
        out << cell << std::string(width[c] - cell.size(), ' ');
      } else {
        out << "  " << std::string(width[c] - cell.size(), ' ') << cell;
      }
    }
    out << '\n';
    if (r == 0) {
      std::size_t total = 0;
      for (std::size_t w : width) total += w + 2;
      out << std::string(total - 2, '-') << '\n';
    }
  }
  return out.str();
}

}  // namespace

AccuracyCell accuracy(std::span<const Prediction> predictions, const GoldLabels& gold,
                      const Ontology& ontology) {
  AccuracyCell cell;
  for (const Prediction& p : predictions) {
    const Hit h = score_one(p, gold, ontology);
    cell.add(h.llt, h.pt);
  }
  return cell;
}

BracketReport bracket_report(std::span<const Prediction> predictions, const GoldLabels& gold,
                             const BracketPartition& partition, const Ontology& ontology) {
  std::unordered_map<std::string, std::size_t> position;
  for (std::size_t i = 0; i < partition.size(); ++i) position.emplace(partition.ids[i], i);
  BracketReport report;
  report.fractions = partition.fractions;
  for (const Prediction& p : predictions) {
    auto it = position.find(p.record_id);
    if (it == position.end()) {
      fail(ErrorCode::kInvalidArgument,
           "bracket_report: record '" + p.record_id + "' is not in the partition");
    }
    const Hit h = score_one(p, gold, ontology);
    report.all.add(h.llt, h.pt);
    if (partition.top[it->second]) report.top.add(h.llt, h.pt);
    if (partition.bottom[it->second]) report.bottom.add(h.llt, h.pt);
    if (partition.bottom_tail[it->second]) report.bottom_tail.add(h.llt, h.pt);
  }
  return report;
}

std::string frequency_bin(std::size_t k) {
  switch (k) {
    case 0: case 1: case 2: case 3: case 5: case 10:
      return std::to_string(k);
    default:
      return k >= 100 ? ">=100" : "other";
  }
}

FrequencyReport frequency_report(std::span<const Prediction> predictions,
                                 const GoldLabels& gold,
                                 const std::map<std::string, std::size_t>& class_counts,
                                 const Ontology& ontology) {
  FrequencyReport report;
  for (const char* name : {"0", "1", "2", "3", "5", "10", ">=100", "other"}) {
    report.bins.emplace_back(name, AccuracyCell{});
  }
  auto bin_of = [&report](const std::string& name) -> AccuracyCell& {
    for (auto& [n, cell] : report.bins) {
      if (n == name) return cell;
    }
    return report.bins.back().second;
  };
  for (const Prediction& p : predictions) {
    const Hit h = score_one(p, gold, ontology);
    auto it = class_counts.find(gold.at(p.record_id));
    const std::size_t k = it == class_counts.end() ? 0 : it->second;
    bin_of(frequency_bin(k)).add(h.llt, h.pt);
  }
  return report;
}

BacktestResult backtest(std::span<const Prediction> predictions, const GoldLabels& gold,
                        double threshold, const Ontology& ontology) {
  BacktestResult result;
  result.threshold = threshold;
  result.total = predictions.size();
  AccuracyCell covered;
  for (const Prediction& p : predictions) {
    if (p.confidence >= threshold) {
      const Hit h = score_one(p, gold, ontology);
      covered.add(h.llt, h.pt);
    }
  }
  result.covered = covered.count;
  result.coverage = result.total == 0 ? 0.0
                                      : static_cast<double>(covered.count) /
                                            static_cast<double>(result.total);
  result.llt_accuracy = covered.llt_accuracy();
  result.pt_accuracy = covered.pt_accuracy();
  return result;
}

nlohmann::ordered_json to_json(const AccuracyCell& cell) {
  nlohmann::ordered_json j;
  j["count"] = cell.count;
  j["llt_accuracy"] = cell.llt_accuracy() ? nlohmann::ordered_json(*cell.llt_accuracy())
                                          : nlohmann::ordered_json(nullptr);
  j["pt_accuracy"] = cell.pt_accuracy() ? nlohmann::ordered_json(*cell.pt_accuracy())
                                        : nlohmann::ordered_json(nullptr);
  return j;
}

nlohmann::ordered_json to_json(const EvalReport& report) {
  nlohmann::ordered_json j;
  j["model"] = report.model_tag;
  if (report.brackets) {
    const BracketReport& b = *report.brackets;
    nlohmann::ordered_json t;
    t["all"] = to_json(b.all);
    t[bracket_label("top", b.fractions.certain)] = to_json(b.top);
    t[bracket_label("btm", b.fractions.uncertain)] = to_json(b.bottom);
    t[bracket_label("btm", b.fractions.uncertain_tail)] = to_json(b.bottom_tail);
    j["table2"] = t;
  }
  if (report.frequency) {
    nlohmann::ordered_json t;
    for (const auto& [name, cell] : report.frequency->bins) t[name] = to_json(cell);
    j["tableA1"] = t;
  }
  if (!report.backtests.empty()) {
    j["backtest"] = nlohmann::ordered_json::array();
    for (const BacktestResult& r : report.backtests) {
      j["backtest"].push_back(
          {{"threshold", r.threshold},
           {"total", r.total},
           {"covered", r.covered},
           {"coverage", r.coverage},
           {"llt_accuracy",
            r.llt_accuracy ? nlohmann::ordered_json(*r.llt_accuracy) : nlohmann::ordered_json()},
           {"pt_accuracy",
            r.pt_accuracy ? nlohmann::ordered_json(*r.pt_accuracy) : nlohmann::ordered_json()}});
    }
  }
  if (report.candidate_recall) {
    j["candidate_recall"] = {{"n", report.candidate_n}, {"recall", *report.candidate_recall}};
  }
  return j;
}

std::string render_table2(std::span<const EvalReport> rows) {
  BracketFractions f;
  for (const EvalReport& r : rows) {
    if (r.brackets) {
      f = r.brackets->fractions;
      break;
    }
  }
  const std::vector<std::string> brackets = {"All", bracket_label("top", f.certain),
                                             bracket_label("btm", f.uncertain),
                                             bracket_label("btm", f.uncertain_tail)};
  std::vector<std::vector<std::string>> grid;
  std::vector<std::string> header = {"Model"};
  for (const char* level : {"LLT", "PT"}) {
    for (const std::string& b : brackets) header.push_back(std::string(level) + " " + b);
  }
  grid.push_back(header);
  for (const EvalReport& r : rows) {
    if (!r.brackets) continue;
    const BracketReport& b = *r.brackets;
    std::vector<std::string> row = {r.model_tag};
    for (const AccuracyCell* c : {&b.all, &b.top, &b.bottom, &b.bottom_tail}) {
      row.push_back(percent(c->llt_accuracy()));
    }
    for (const AccuracyCell* c : {&b.all, &b.top, &b.bottom, &b.bottom_tail}) {
      row.push_back(percent(c->pt_accuracy()));
    }
    grid.push_back(row);
  }
  return render_grid(grid);
}

std::string render_table_a1(std::span<const EvalReport> rows) {
  std::vector<std::vector<std::string>> grid;
  std::vector<std::string> header = {"Model"};
  for (const char* name : {"0", "1", "2", "3", "5", "10", ">=100", "other"}) {
    const std::string bin(name);
    header.push_back(bin == "other" ? bin : bin[0] == '>' ? "k" + bin : "k=" + bin);
  }
  grid.push_back(header);
  std::vector<std::string> counts = {"(n)"};
  bool have_counts = false;
  for (const EvalReport& r : rows) {
    if (!r.frequency) continue;
    std::vector<std::string> row = {r.model_tag};
    for (const auto& [name, cell] : r.frequency->bins) {
      row.push_back(percent(cell.llt_accuracy()));
      if (!have_counts) counts.push_back(std::to_string(cell.count));
    }
    have_counts = true;
    grid.push_back(row);
  }
  if (have_counts) grid.push_back(counts);
  return render_grid(grid);
}

std::string render_backtest(std::span<const EvalReport> rows) {
  std::vector<std::vector<std::string>> grid = {
      {"Model", "threshold", "coverage", "LLT acc", "PT acc"}};
  for (const EvalReport& r : rows) {
    for (const BacktestResult& b : r.backtests) {
      char thr[32];
      std::snprintf(thr, sizeof(thr), "%.3g", b.threshold);
      grid.push_back({r.model_tag, thr, percent(b.coverage), percent(b.llt_accuracy),
                      percent(b.pt_accuracy)});
    }
  }
  return render_grid(grid);
}

namespace {

CellStats stats_of(const std::vector<double>& values) {
  CellStats s;
  s.runs = values.size();
  if (values.empty()) return s;
  for (double v : values) s.mean += v;
  s.mean /= static_cast<double>(values.size());
  if (values.size() > 1) {
    double ss = 0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.stddev = std::sqrt(ss / static_cast<double>(values.size() - 1));
  }
  return s;
}

std::string format_stats(const CellStats& s) {
  if (s.runs == 0) return "-";
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.1f±%.1f", 100.0 * s.mean, 100.0 * s.stddev);
  return buf;
}

}  // namespace

CellStats llt_stats(std::span<const AccuracyCell> cells) {
  std::vector<double> v;
  for (const AccuracyCell& c : cells) {
    if (auto a = c.llt_accuracy()) v.push_back(*a);
  }
  return stats_of(v);
}

CellStats pt_stats(std::span<const AccuracyCell> cells) {
  std::vector<double> v;
  for (const AccuracyCell& c : cells) {
    if (auto a = c.pt_accuracy()) v.push_back(*a);
  }
  return stats_of(v);
}

std::string render_table2_runs(const std::vector<std::string>& tags,
                               const std::vector<std::vector<BracketReport>>& runs) {
  require(tags.size() == runs.size(), "render_table2_runs: one tag per row");
  BracketFractions f;
  if (!runs.empty() && !runs.front().empty()) f = runs.front().front().fractions;
  std::vector<std::vector<std::string>> grid;
  std::vector<std::string> header = {"Model"};
  for (const char* level : {"LLT", "PT"}) {
    for (const std::string& b :
         {std::string("All"), bracket_label("top", f.certain), bracket_label("btm", f.uncertain),
          bracket_label("btm", f.uncertain_tail)}) {
      header.push_back(std::string(level) + " " + b);
    }
  }
  grid.push_back(header);
  for (std::size_t r = 0; r < tags.size(); ++r) {
    std::vector<std::string> row = {tags[r]};
    std::vector<std::vector<AccuracyCell>> columns(4);
    for (const BracketReport& b : runs[r]) {
      columns[0].push_back(b.all);
      columns[1].push_back(b.top);
      columns[2].push_back(b.bottom);
      columns[3].push_back(b.bottom_tail);
    }
    for (const auto& c : columns) row.push_back(format_stats(llt_stats(c)));
    for (const auto& c : columns) row.push_back(format_stats(pt_stats(c)));
    grid.push_back(row);
  }
  return render_grid(grid);
}

}  // namespace xtars
