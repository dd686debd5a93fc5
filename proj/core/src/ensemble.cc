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

#include "xtars/ensemble.h"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <numeric>
#include <set>

#include "xtars/artifact.h"
#include "xtars/error.h"

namespace xtars {

Ensemble::Ensemble(std::vector<std::shared_ptr<const TrainedClassifier>> members)
    : members_(std::move(members)) {
  require(!members_.empty(), "Ensemble: needs at least one member");
  std::set<std::uint64_t> seen;
  for (const auto& m : members_) {
    require(m != nullptr, "Ensemble: null member");
    require(*m->labels() == *members_.front()->labels(),
            "Ensemble: members must share one label index");
    require(seen.insert(m->summary().seed).second, "Ensemble: duplicate member seed");
  }
}

const std::shared_ptr<const LabelIndex>& Ensemble::labels() const {
  return members_.front()->labels();
}

std::vector<std::uint64_t> Ensemble::seeds() const {
  std::vector<std::uint64_t> out;
  for (const auto& m : members_) out.push_back(m->summary().seed);
  return out;
}

PredictiveDistribution mean_distribution(std::span<const PredictiveDistribution> members) {
  require(!members.empty(), "mean_distribution: no members");
  const std::size_t k = members.front().size();
  for (const auto& m : members) require(m.size() == k, "mean_distribution: size mismatch");
  PredictiveDistribution out{members.front().labels, std::vector<double>(k)};
  std::vector<double> column(members.size());
  const double inv = 1.0 / static_cast<double>(members.size());
  for (std::size_t j = 0; j < k; ++j) {
    for (std::size_t i = 0; i < members.size(); ++i) column[i] = members[i].probabilities[j];
    std::sort(column.begin(), column.end());
    double sum = 0;
    for (double p : column) sum += p;
    out.probabilities[j] = sum * inv;
  }
  return out;
}

PredictiveDistribution Ensemble::predict_distribution(std::string_view rt) const {
  std::vector<PredictiveDistribution> dists;
  dists.reserve(members_.size());
  // Members share a featurizer config in practice, but each featurizes
  // with its own in case they differ.
  for (const auto& m : members_) dists.push_back(m->predict_distribution(rt));
  return mean_distribution(dists);
}

Ensemble train_ensemble(const std::vector<CodedRecord>& train,
                        const std::vector<CodedRecord>& validation,
                        const ClassifierHparams& hparams,
                        const std::vector<std::uint64_t>& seeds) {
  require(!seeds.empty(), "train_ensemble: no seeds");
  require(std::set<std::uint64_t>(seeds.begin(), seeds.end()).size() == seeds.size(),
          "train_ensemble: seeds must be pairwise distinct");
  std::vector<std::shared_ptr<const TrainedClassifier>> members;
  for (std::uint64_t seed : seeds) {
    members.push_back(std::make_shared<const TrainedClassifier>(
        train_classifier(train, validation, hparams, seed)));
  }
  return Ensemble(std::move(members));
}

double predictive_entropy(std::span<const double> probabilities) {
  double h = 0;
  for (double p : probabilities) {
    if (p > 0) h -= p * std::log(p);
  }
  return h < 0 ? 0.0 : h;
}

BracketPartition bracket_partition(std::span<const std::string> ids,
                                   std::span<const double> entropies,
                                   const BracketFractions& fractions) {
  require(ids.size() == entropies.size(), "bracket_partition: ids and entropies differ in length");
  require(!ids.empty(), "bracket_partition: no records");
  for (double f : {fractions.certain, fractions.uncertain, fractions.uncertain_tail}) {
    require(f >= 0 && f <= 1, "bracket_partition: fractions must lie in [0, 1]");
  }
  require(fractions.uncertain_tail <= fractions.uncertain,
          "bracket_partition: the tail bracket must not exceed the uncertain bracket");
  const std::size_t n = ids.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (entropies[a] != entropies[b]) return entropies[a] < entropies[b];
    return ids[a] < ids[b];
  });
  auto floor_of = [n](double f) {
    return static_cast<std::size_t>(std::floor(f * static_cast<double>(n) + 1e-9));
  };
  const std::size_t n_top = floor_of(fractions.certain);
  const std::size_t n_btm = floor_of(fractions.uncertain);
  const std::size_t n_tail = floor_of(fractions.uncertain_tail);

  BracketPartition part;
  part.fractions = fractions;
  part.ids.assign(ids.begin(), ids.end());
  part.entropies.assign(entropies.begin(), entropies.end());
  part.top.assign(n, false);
  part.bottom.assign(n, false);
  part.bottom_tail.assign(n, false);
  for (std::size_t r = 0; r < n; ++r) {
    const std::size_t i = order[r];
    part.top[i] = r < n_top;
    part.bottom[i] = r >= n - n_btm;
    part.bottom_tail[i] = r >= n - n_tail;
  }
  return part;
}

void save_ensemble(const std::string& dir, const Ensemble& ensemble) {
  std::filesystem::create_directories(dir);
  nlohmann::ordered_json manifest;
  manifest["kind"] = "ensemble";
  manifest["label_index_version"] = ensemble.labels()->version();
  manifest["members"] = nlohmann::ordered_json::array();
  for (const auto& m : ensemble.members()) {
    const std::string sub = "member-" + std::to_string(m->summary().seed);
    save_classifier((std::filesystem::path(dir) / sub).string(), *m);
    manifest["members"].push_back({{"dir", sub}, {"seed", m->summary().seed}});
  }
  write_json_file((std::filesystem::path(dir) / "ensemble.json").string(), manifest);
}

Ensemble load_ensemble(const std::string& dir) {
  const auto manifest = read_json_file((std::filesystem::path(dir) / "ensemble.json").string());
  std::vector<std::shared_ptr<const TrainedClassifier>> members;
  try {
    for (const auto& entry : manifest.at("members")) {
      auto member = std::make_shared<const TrainedClassifier>(load_classifier(
          (std::filesystem::path(dir) / entry.at("dir").get<std::string>()).string()));
      if (member->summary().seed != entry.at("seed").get<std::uint64_t>()) {
        fail(ErrorCode::kIntegrity, "ensemble member seed disagrees with ensemble.json");
      }
      members.push_back(std::move(member));
    }
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::kParse, "ensemble.json in '" + dir + "': " + e.what());
  }
  Ensemble ensemble(std::move(members));
  if (manifest.value("label_index_version", "") != ensemble.labels()->version()) {
    fail(ErrorCode::kIntegrity, "ensemble label index version mismatch in '" + dir + "'");
  }
  return ensemble;
}

}  // namespace xtars
