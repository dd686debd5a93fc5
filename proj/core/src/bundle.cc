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

#include "xtars/bundle.h"

#include <algorithm>
#include <cstdio>
#include <filesystem>

#include "xtars/artifact.h"
#include "xtars/error.h"
#include "xtars/hashing.h"

namespace xtars {

namespace fs = std::filesystem;

namespace {

constexpr int kBundleFormat = 1;

const char* scorer_kind_name(ScorerKind kind) {
  return kind == ScorerKind::kClassifier ? "classifier" : "ensemble";
}

std::string scorer_manifest(const fs::path& root, ScorerKind kind) {
  return (root / "scorer" / (kind == ScorerKind::kClassifier ? "manifest.json" : "ensemble.json"))
      .string();
}

fs::path fresh_dir(const std::string& dir) {
  const fs::path root(dir);
  fs::remove_all(root / "scorer");
  fs::remove_all(root / "matcher");
  fs::create_directories(root);
  return root;
}

// The version tag is a digest of the checksums of every part, so it changes
// whenever any weight, label or ontology byte does.
void write_bundle_manifest(const fs::path& root, const Ontology& ontology, ScorerKind kind,
                           bool with_matcher) {
  nlohmann::ordered_json m;
  m["format"] = "xtars-bundle";
  m["format_version"] = kBundleFormat;
  const std::string ont_sum = file_checksum((root / "ontology.csv").string());
  const std::string scorer_sum = file_checksum(scorer_manifest(root, kind));
  std::string digest_input = ont_sum + scorer_sum;
  std::string matcher_sum;
  if (with_matcher) {
    matcher_sum = file_checksum((root / "matcher" / "manifest.json").string());
    digest_input += matcher_sum;
  }
  m["model_version"] = hex64(fnv1a64(digest_input));
  m["ontology"] = {{"path", "ontology.csv"}, {"version", ontology.version()},
                   {"checksum", ont_sum}};
  m["scorer"] = {{"kind", scorer_kind_name(kind)}, {"path", "scorer"}, {"checksum", scorer_sum}};
  if (with_matcher) {
    m["matcher"] = {{"path", "matcher"}, {"checksum", matcher_sum}};
  }
  write_json_file((root / "bundle.json").string(), m);
}

}  // namespace

std::string ModelBundle::model_tag() const {
  if (!is_xtars()) return scorer_kind_name(scorer_kind);
  std::string negatives;
  if (sampler.use_clf_top) negatives = "top-5";
  if (sampler.neg > 0) {
    if (!negatives.empty()) negatives += "+";
    negatives += std::to_string(sampler.neg) + " cos";
  }
  char temperature[32];
  std::snprintf(temperature, sizeof(temperature), "%g", sampler.temperature);
  return "xtars(neg=" + negatives + "; T=" + temperature + ")";
}

void save_bundle(const std::string& dir, const Ontology& ontology,
                 const TrainedClassifier& classifier) {
  const fs::path root = fresh_dir(dir);
  save_ontology((root / "ontology.csv").string(), ontology);
  save_classifier((root / "scorer").string(), classifier);
  write_bundle_manifest(root, ontology, ScorerKind::kClassifier, false);
}

void save_bundle(const std::string& dir, const Ontology& ontology, const Ensemble& ensemble) {
  const fs::path root = fresh_dir(dir);
  save_ontology((root / "ontology.csv").string(), ontology);
  save_ensemble((root / "scorer").string(), ensemble);
  write_bundle_manifest(root, ontology, ScorerKind::kEnsemble, false);
}

void save_xtars_bundle(const std::string& dir, const std::string& scorer_bundle_dir,
                       const MatcherModel& matcher, const SamplerConfig& sampler) {
  const ModelBundle source = load_bundle(scorer_bundle_dir);
  const fs::path src(scorer_bundle_dir);
  const fs::path root = fresh_dir(dir);
  if (fs::weakly_canonical(src) != fs::weakly_canonical(root)) {
    fs::copy_file(src / "ontology.csv", root / "ontology.csv",
                  fs::copy_options::overwrite_existing);
    fs::copy(src / "scorer", root / "scorer", fs::copy_options::recursive);
  }
  save_matcher((root / "matcher").string(), matcher, sampler);
  write_bundle_manifest(root, source.ontology, source.scorer_kind, true);
}

ModelBundle load_bundle(const std::string& dir) {
  const fs::path root(dir);
  const fs::path manifest_path = root / "bundle.json";
  if (!fs::exists(manifest_path)) {
    fail(ErrorCode::kIo, "missing model artifact: no bundle.json in '" + dir + "'");
  }
  const auto m = read_json_file(manifest_path.string());
  ModelBundle bundle;
  try {
    if (m.at("format").get<std::string>() != "xtars-bundle" ||
        m.at("format_version").get<int>() != kBundleFormat) {
      fail(ErrorCode::kParse, "unsupported bundle format in '" + dir + "'");
    }
    bundle.model_version = m.at("model_version").get<std::string>();
    const auto& ont = m.at("ontology");
    const fs::path ont_path = root / ont.at("path").get<std::string>();
    verify_checksum(ont_path.string(), ont.at("checksum").get<std::string>());
    bundle.ontology = load_ontology(ont_path.string(), ont.at("version").get<std::string>());

    const auto& sc = m.at("scorer");
    const std::string kind = sc.at("kind").get<std::string>();
    const fs::path scorer_dir = root / sc.at("path").get<std::string>();
    if (kind == "classifier") {
      bundle.scorer_kind = ScorerKind::kClassifier;
      verify_checksum(scorer_manifest(root, bundle.scorer_kind), sc.at("checksum").get<std::string>());
      bundle.scorer =
          std::make_shared<const TrainedClassifier>(load_classifier(scorer_dir.string()));
    } else if (kind == "ensemble") {
      bundle.scorer_kind = ScorerKind::kEnsemble;
      verify_checksum(scorer_manifest(root, bundle.scorer_kind), sc.at("checksum").get<std::string>());
      bundle.scorer = std::make_shared<const Ensemble>(load_ensemble(scorer_dir.string()));
    } else {
      fail(ErrorCode::kParse, "unknown scorer kind '" + kind + "'");
    }

    if (m.contains("matcher")) {
      const auto& mm = m.at("matcher");
      const fs::path matcher_dir = root / mm.at("path").get<std::string>();
      verify_checksum((matcher_dir / "manifest.json").string(), mm.at("checksum").get<std::string>());
      LoadedMatcher loaded = load_matcher(matcher_dir.string());
      bundle.matcher.emplace(std::move(loaded.model));
      bundle.sampler = loaded.sampler;
    }
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::kParse, "bundle.json in '" + dir + "': " + e.what());
  }
  for (const std::string& code : bundle.scorer->labels()->codes()) {
    if (!bundle.ontology.contains(code)) {
      fail(ErrorCode::kIntegrity, "scorer label '" + code + "' is not in the bundled ontology");
    }
  }
  return bundle;
}

PipelineOutput run_pipeline(const ModelBundle& bundle, std::string_view rt) {
  PipelineOutput out;
  const PredictiveDistribution dist = bundle.scorer->predict_distribution(rt);
  out.entropy = predictive_entropy(dist);
  const auto top = std::max_element(dist.probabilities.begin(), dist.probabilities.end());
  out.distribution_confidence = *top;
  if (bundle.matcher) {
    const std::size_t n = std::min(bundle.sampler.n_candidates, dist.probabilities.size());
    XtarsResult r = xtars_predict(dist, *bundle.matcher, bundle.ontology, rt, n);
    out.llt_code = std::move(r.llt_code);
    out.match_score = r.match_score;
  } else {
    out.llt_code = dist.labels->codes()[static_cast<std::size_t>(top - dist.probabilities.begin())];
  }
  return out;
}

double select_confidence(const PipelineOutput& out, ConfidenceSource source) {
  switch (source) {
    case ConfidenceSource::kDistribution:
      return out.distribution_confidence;
    case ConfidenceSource::kMatcher:
      if (!out.match_score) {
        fail(ErrorCode::kInvalidArgument, "matcher confidence requested for a model without a matcher");
      }
      return *out.match_score;
    case ConfidenceSource::kAuto:
      break;
  }
  return out.match_score ? *out.match_score : out.distribution_confidence;
}

std::vector<Prediction> predict_records(const ModelBundle& bundle,
                                        const std::vector<CodedRecord>& records,
                                        ConfidenceSource source) {
  std::vector<Prediction> predictions;
  predictions.reserve(records.size());
  const std::string tag = bundle.model_tag();
  for (const CodedRecord& r : records) {
    const PipelineOutput out = run_pipeline(bundle, r.rt);
    predictions.push_back({r.id, out.llt_code, select_confidence(out, source), out.entropy, tag});
  }
  return predictions;
}

double candidate_recall(const Scorer& scorer, const std::vector<CodedRecord>& records,
                        std::size_t n) {
  if (records.empty()) return 0.0;
  std::size_t hits = 0;
  for (const CodedRecord& r : records) {
    const CandidateSet candidates = top_n(scorer.predict_distribution(r.rt), n);
    for (const Candidate& c : candidates) {
      if (c.llt_code == r.llt_code) {
        ++hits;
        break;
      }
    }
  }
  return static_cast<double>(hits) / static_cast<double>(records.size());
}

EvalReport evaluate_predictions(const std::string& model_tag,
                                const std::vector<Prediction>& predictions,
                                const std::vector<CodedRecord>& records,
                                const std::map<std::string, std::size_t>& class_counts,
                                const Ontology& ontology, const EvalOptions& options) {
  GoldLabels gold;
  for (const CodedRecord& r : records) gold.emplace(r.id, r.llt_code);
  EvalReport report;
  report.model_tag = model_tag;
  if (options.table2) {
    std::vector<std::string> ids;
    std::vector<double> entropies;
    for (const Prediction& p : predictions) {
      ids.push_back(p.record_id);
      entropies.push_back(p.entropy);
    }
    const BracketPartition partition = bracket_partition(ids, entropies, options.brackets);
    report.brackets = bracket_report(predictions, gold, partition, ontology);
  }
  if (options.table_a1) {
    report.frequency = frequency_report(predictions, gold, class_counts, ontology);
  }
  for (double t : options.thresholds) {
    report.backtests.push_back(backtest(predictions, gold, t, ontology));
  }
  return report;
}

EvalReport evaluate_bundle(const ModelBundle& bundle, const std::vector<CodedRecord>& records,
                           const std::map<std::string, std::size_t>& class_counts,
                           const EvalOptions& options) {
  std::vector<Prediction> predictions = predict_records(bundle, records, options.confidence);
  if (options.bracket_reference != nullptr) {
    for (std::size_t i = 0; i < records.size(); ++i) {
      predictions[i].entropy =
          predictive_entropy(options.bracket_reference->predict_distribution(records[i].rt));
    }
  }
  EvalReport report = evaluate_predictions(bundle.model_tag(), predictions, records,
                                           class_counts, bundle.ontology, options);
  if (bundle.matcher) {
    report.candidate_n = bundle.sampler.n_candidates;
    report.candidate_recall = candidate_recall(*bundle.scorer, records, report.candidate_n);
  }
  return report;
}

}  // namespace xtars
