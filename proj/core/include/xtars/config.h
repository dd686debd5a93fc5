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

#ifndef XTARS_CONFIG_H_
#define XTARS_CONFIG_H_

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "xtars/classifier.h"
#include "xtars/ensemble.h"
#include "xtars/featurizer.h"
#include "xtars/matcher.h"

namespace xtars {

enum class NegativeStrategy { kCos, kTop5, kTop5PlusCos };
NegativeStrategy parse_negative_strategy(std::string_view name);
std::string_view negative_strategy_name(NegativeStrategy strategy);
// Sets use_clf_top and, for kTop5, neg = 0.
void apply_negative_strategy(NegativeStrategy strategy, SamplerConfig& sampler);

enum class ConfidenceSource { kAuto, kDistribution, kMatcher };
ConfidenceSource parse_confidence_source(std::string_view name);

struct CorpusSettings {
  std::size_t rare_threshold = 10;
  double test_fraction = 0.05;
  double val_fraction = 0.10;
  std::size_t xtars_val_cap = 200;
};

struct EnsembleSettings {
  std::vector<std::uint64_t> seeds = {1, 2, 3};
  BracketFractions brackets;
};

struct EvalSettings {
  double threshold = 0.5;
  ConfidenceSource confidence = ConfidenceSource::kAuto;
};

struct ServeSettings {
  std::string host = "127.0.0.1";
  int port = 8080;
  std::size_t max_batch = 1024;
  // Proposals with entropy at or below this are marked "certain".
  double entropy_threshold = 1.0;
};

// One canonical run configuration. Sections: featurizer, corpus,
// classifier, ensemble, matcher, eval, serve. Missing keys keep defaults.
struct PipelineConfig {
  FeaturizerConfig featurizer;
  CorpusSettings corpus;
  ClassifierHparams classifier;
  EnsembleSettings ensemble;
  SamplerConfig sampler;
  MatcherHparams matcher;
  EvalSettings eval;
  ServeSettings serve;
};

// Throws Error(kParse) on unknown keys or wrong types.
PipelineConfig config_from_json(const nlohmann::json& j);
PipelineConfig load_config(const std::string& path);
nlohmann::ordered_json config_to_json(const PipelineConfig& config);

nlohmann::ordered_json featurizer_to_json(const FeaturizerConfig& config);
FeaturizerConfig featurizer_from_json(const nlohmann::json& j);
nlohmann::ordered_json sampler_to_json(const SamplerConfig& config);
SamplerConfig sampler_from_json(const nlohmann::json& j);

}  // namespace xtars

#endif  // XTARS_CONFIG_H_
