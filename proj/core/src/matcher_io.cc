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

#include <filesystem>

#include "xtars/artifact.h"
#include "xtars/config.h"
#include "xtars/error.h"
#include "xtars/matcher.h"

namespace xtars {

namespace fs = std::filesystem;

void save_matcher(const std::string& dir, const MatcherModel& model,
                  const SamplerConfig& sampler) {
  fs::create_directories(dir);
  const fs::path root(dir);
  write_matrix((root / "weights.bin").string(), 1, model.weights().size(), model.weights());
  const MatcherSummary& s = model.summary();
  nlohmann::ordered_json manifest;
  manifest["kind"] = "matcher";
  manifest["pair_featurizer"] = featurizer_to_json(model.features().text);
  manifest["block_weight"] = model.features().block_weight;
  manifest["sampler"] = sampler_to_json(sampler);
  manifest["bias"] = model.bias();
  manifest["seed"] = s.seed;
  manifest["selected_epoch"] = s.selected_epoch;
  manifest["validation_accuracy"] = s.validation_accuracy;
  manifest["epoch_validation_accuracy"] = s.epoch_validation_accuracy;
  manifest["checksums"] = {{"weights.bin", file_checksum((root / "weights.bin").string())}};
  write_json_file((root / "manifest.json").string(), manifest);
}

LoadedMatcher load_matcher(const std::string& dir) {
  const fs::path root(dir);
  if (!fs::exists(root / "manifest.json")) {
    fail(ErrorCode::kIo, "no matcher manifest.json in '" + dir + "'");
  }
  const auto manifest = read_json_file((root / "manifest.json").string());
  try {
    if (manifest.at("kind") != "matcher") {
      fail(ErrorCode::kParse, "'" + dir + "' does not hold a matcher");
    }
    verify_checksum((root / "weights.bin").string(),
                    manifest.at("checksums").at("weights.bin").get<std::string>());
    PairFeaturizerConfig features;
    features.text = featurizer_from_json(manifest.at("pair_featurizer"));
    features.block_weight = manifest.at("block_weight").get<float>();
    Matrix m = read_matrix((root / "weights.bin").string());
    if (m.rows != 1 || m.cols != features.text.dim) {
      fail(ErrorCode::kParse, "matcher weights.bin shape does not match its featurizer");
    }
    MatcherSummary s;
    s.seed = manifest.at("seed").get<std::uint64_t>();
    s.selected_epoch = manifest.at("selected_epoch").get<int>();
    s.validation_accuracy = manifest.at("validation_accuracy").get<double>();
    s.epoch_validation_accuracy =
        manifest.at("epoch_validation_accuracy").get<std::vector<double>>();
    return LoadedMatcher{MatcherModel(std::move(features), std::move(m.values),
                                      manifest.at("bias").get<float>(), std::move(s)),
                         sampler_from_json(manifest.at("sampler"))};
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::kParse, "matcher manifest in '" + dir + "': " + e.what());
  }
}

}  // namespace xtars
