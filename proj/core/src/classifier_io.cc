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
#include <fstream>

#include "xtars/artifact.h"
#include "xtars/classifier.h"
#include "xtars/config.h"
#include "xtars/csv.h"
#include "xtars/error.h"

namespace xtars {

namespace fs = std::filesystem;

void save_classifier(const std::string& dir, const TrainedClassifier& model) {
  fs::create_directories(dir);
  const fs::path root(dir);
  const std::size_t k = model.num_labels();
  const std::size_t d = model.dim();

  {
    std::ofstream out(root / "labels.csv", std::ios::binary);
    if (!out) fail(ErrorCode::kIo, "cannot write labels.csv in '" + dir + "'");
    csv::write_row(out, {"index", "llt_code"});
    for (std::size_t i = 0; i < k; ++i) {
      csv::write_row(out, {std::to_string(i), model.labels()->code(i)});
    }
  }
  // On disk the matrix is label-major (K x D); in memory it is feature-major.
  std::vector<float> label_major(k * d);
  const auto w = model.weights();
  for (std::size_t f = 0; f < d; ++f) {
    for (std::size_t j = 0; j < k; ++j) label_major[j * d + f] = w[f * k + j];
  }
  write_matrix((root / "weights.bin").string(), k, d, label_major);

  const TrainingSummary& s = model.summary();
  nlohmann::ordered_json manifest;
  manifest["kind"] = "classifier";
  manifest["featurizer"] = featurizer_to_json(model.featurizer());
  manifest["seed"] = s.seed;
  manifest["num_labels"] = k;
  manifest["label_index_version"] = model.labels()->version();
  manifest["selected_epoch"] = s.selected_epoch;
  manifest["validation_accuracy"] = s.validation_accuracy;
  manifest["epoch_validation_accuracy"] = s.epoch_validation_accuracy;
  manifest["checksums"] = {{"labels.csv", file_checksum((root / "labels.csv").string())},
                           {"weights.bin", file_checksum((root / "weights.bin").string())}};
  write_json_file((root / "manifest.json").string(), manifest);
}

TrainedClassifier load_classifier(const std::string& dir) {
  const fs::path root(dir);
  if (!fs::exists(root / "manifest.json")) {
    fail(ErrorCode::kIo, "no classifier manifest.json in '" + dir + "'");
  }
  const auto manifest = read_json_file((root / "manifest.json").string());
  try {
    if (manifest.at("kind") != "classifier") {
      fail(ErrorCode::kParse, "'" + dir + "' does not hold a classifier");
    }
    verify_checksum((root / "labels.csv").string(),
                    manifest.at("checksums").at("labels.csv").get<std::string>());
    verify_checksum((root / "weights.bin").string(),
                    manifest.at("checksums").at("weights.bin").get<std::string>());

    std::vector<std::string> codes;
    {
      std::ifstream in(root / "labels.csv", std::ios::binary);
      auto header = csv::read_row(in);
      if (!header || *header != std::vector<std::string>{"index", "llt_code"}) {
        fail(ErrorCode::kParse, "labels.csv: bad header");
      }
      while (auto row = csv::read_row(in)) {
        if (row->size() != 2) fail(ErrorCode::kParse, "labels.csv: expected 2 fields");
        if (std::stoull((*row)[0]) != codes.size()) {
          fail(ErrorCode::kParse, "labels.csv: indices must be dense and ordered");
        }
        codes.push_back((*row)[1]);
      }
    }
    auto labels = std::make_shared<const LabelIndex>(codes);
    if (labels->size() != codes.size() ||
        !std::equal(codes.begin(), codes.end(), labels->codes().begin())) {
      fail(ErrorCode::kParse, "labels.csv: codes must be unique and ascending");
    }
    if (labels->version() != manifest.at("label_index_version").get<std::string>()) {
      fail(ErrorCode::kIntegrity, "label index version mismatch in '" + dir + "'");
    }
    FeaturizerConfig featurizer = featurizer_from_json(manifest.at("featurizer"));
    Matrix m = read_matrix((root / "weights.bin").string());
    const std::size_t k = labels->size();
    const std::size_t d = featurizer.dim;
    if (m.rows != k || m.cols != d) {
      fail(ErrorCode::kParse, "weights.bin shape does not match labels and featurizer");
    }
    std::vector<float> feature_major(k * d);
    for (std::size_t j = 0; j < k; ++j) {
      for (std::size_t f = 0; f < d; ++f) feature_major[f * k + j] = m.values[j * d + f];
    }
    TrainingSummary s;
    s.seed = manifest.at("seed").get<std::uint64_t>();
    s.selected_epoch = manifest.at("selected_epoch").get<int>();
    s.validation_accuracy = manifest.at("validation_accuracy").get<double>();
    s.epoch_validation_accuracy =
        manifest.at("epoch_validation_accuracy").get<std::vector<double>>();
    return TrainedClassifier(std::move(featurizer), std::move(labels), std::move(feature_major),
                             std::move(s));
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::kParse, "classifier manifest in '" + dir + "': " + e.what());
  } catch (const std::invalid_argument&) {
    fail(ErrorCode::kParse, "labels.csv in '" + dir + "': non-numeric index");
  }
}

}  // namespace xtars
