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

// Command line front end: data generation, ingestion, splitting, training,
// prediction, evaluation and serving.

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "xtars/artifact.h"
#include "xtars/bundle.h"
#include "xtars/config.h"
#include "xtars/corpus.h"
#include "xtars/error.h"
#include "xtars/log.h"
#include "xtars/ontology.h"
#include "xtars/pipeline.h"
#include "xtars/record.h"
#include "xtars/service.h"

namespace {

using namespace xtars;
namespace fs = std::filesystem;

struct Common {
  std::uint64_t seed = 0;
  std::string config_path;
  std::string log_level = "info";
};

void add_common(CLI::App* cmd, Common& common) {
  cmd->add_option("--seed", common.seed, "Random seed");
  cmd->add_option("--config", common.config_path, "JSON pipeline config")
      ->check(CLI::ExistingFile);
  cmd->add_option("--log-level", common.log_level, "debug, info, warn or error");
}

PipelineConfig load(const Common& common) {
  set_log_level(parse_log_level(common.log_level));
  return common.config_path.empty() ? PipelineConfig{} : load_config(common.config_path);
}

void require_file(const std::string& path, const std::string& what) {
  if (!fs::exists(path)) fail(ErrorCode::kIo, "missing " + what + ": " + path);
}

std::vector<double> parse_fractions(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      fail(ErrorCode::kInvalidArgument, "not a number: '" + item + "'");
    }
  }
  return out;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

// --- gen-ontology ----------------------------------------------------------

struct GenOntologyArgs {
  std::size_t num_llt = 500;
  std::size_t num_pt = 150;
  std::string version = "synthetic";
  std::string out;
};

void run_gen_ontology(const Common& common, const GenOntologyArgs& a) {
  load(common);
  const Ontology ont = generate_synthetic_ontology(a.num_llt, a.num_pt, common.seed, a.version);
  save_ontology(a.out, ont);
  log_event(LogLevel::kInfo, "gen-ontology",
            {{"out", a.out}, {"llts", ont.size()}, {"pts", ont.pt_count()}});
}

// --- gen-corpus ------------------------------------------------------------

struct GenCorpusArgs {
  std::string ontology;
  std::string version = "synthetic";
  std::size_t num_records = 6000;
  std::string out;
};

void run_gen_corpus(const Common& common, const GenCorpusArgs& a) {
  load(common);
  require_file(a.ontology, "ontology");
  const Ontology ont = load_ontology(a.ontology, a.version);
  SyntheticCorpusConfig cfg;
  cfg.num_records = a.num_records;
  const auto records = generate_synthetic_corpus(ont, cfg, common.seed);
  write_records_jsonl_file(a.out, records);
  log_event(LogLevel::kInfo, "gen-corpus", {{"out", a.out}, {"records", records.size()}});
}

// --- ingest ----------------------------------------------------------------

struct IngestArgs {
  std::string ontology;
  std::string version = "synthetic";
  std::string input;
  std::string out;
};

void run_ingest(const Common& common, const IngestArgs& a) {
  const PipelineConfig cfg = load(common);
  require_file(a.ontology, "ontology");
  require_file(a.input, "input records");
  const Ontology ont = load_ontology(a.ontology, a.version);
  IngestedCorpus corpus =
      ingest(read_records_jsonl_file(a.input), ont, cfg.corpus, common.seed);
  write_ingested(a.out, corpus);
  log_event(LogLevel::kInfo, "ingest",
            {{"out", a.out},
             {"records", corpus.records.size()},
             {"augmented", corpus.augmented.size()},
             {"dropped_unknown_code", corpus.dropped_unknown_code},
             {"dropped_empty", corpus.dropped_empty},
             {"dropped_duplicates", corpus.dropped_duplicates}});
}

// --- split -----------------------------------------------------------------

struct SplitArgs {
  std::string input;
  std::string out;
};

void run_split(const Common& common, const SplitArgs& a) {
  const PipelineConfig cfg = load(common);
  const DatasetSplit split = split_corpus(read_ingested(a.input), cfg.corpus, common.seed);
  write_split(a.out, split);
  log_event(LogLevel::kInfo, "split",
            {{"out", a.out},
             {"train", split.train.size()},
             {"validation", split.validation.size()},
             {"test", split.test.size()}});
}

// --- train-classifier / train-ensemble -------------------------------------

struct TrainArgs {
  std::string data;
  std::string ontology;
  std::string version = "synthetic";
  std::string out;
  std::optional<int> epochs;
};

void run_train_classifier(const Common& common, const TrainArgs& a) {
  PipelineConfig cfg = load(common);
  if (a.epochs) cfg.classifier.epochs = *a.epochs;
  cfg.classifier.featurizer = cfg.featurizer;
  require_file(a.ontology, "ontology");
  const Ontology ont = load_ontology(a.ontology, a.version);
  const DatasetSplit split = read_split(a.data);
  const TrainedClassifier model =
      train_classifier(split.train, split.validation, cfg.classifier, common.seed);
  save_bundle(a.out, ont, model);
  log_event(LogLevel::kInfo, "train-classifier",
            {{"out", a.out},
             {"selected_epoch", model.summary().selected_epoch},
             {"validation_accuracy", model.summary().validation_accuracy}});
}

void run_train_ensemble(const Common& common, const TrainArgs& a) {
  PipelineConfig cfg = load(common);
  if (a.epochs) cfg.classifier.epochs = *a.epochs;
  cfg.classifier.featurizer = cfg.featurizer;
  require_file(a.ontology, "ontology");
  const Ontology ont = load_ontology(a.ontology, a.version);
  const DatasetSplit split = read_split(a.data);
  const Ensemble ensemble = train_ensemble(split.train, split.validation, cfg.classifier,
                                           ensemble_member_seeds(cfg.ensemble, common.seed));
  save_bundle(a.out, ont, ensemble);
  log_event(LogLevel::kInfo, "train-ensemble",
            {{"out", a.out},
             {"members", ensemble.members().size()},
             {"validation_accuracy", top1_accuracy(ensemble, split.validation)}});
}

// --- train-matcher ---------------------------------------------------------

struct MatcherArgs {
  std::string data;
  std::string scorer;
  std::string out;
  std::optional<std::string> neg_strategy;
  std::optional<std::size_t> neg;
  std::optional<double> temperature;
  std::optional<std::size_t> candidates;
  std::optional<std::string> cosine_sampler;
  std::optional<int> epochs;
  bool freeze_negatives = false;
};

void run_train_matcher(const Common& common, const MatcherArgs& a) {
  PipelineConfig cfg = load(common);
  if (a.neg) cfg.sampler.neg = *a.neg;
  if (a.neg_strategy) apply_negative_strategy(parse_negative_strategy(*a.neg_strategy), cfg.sampler);
  if (a.temperature) cfg.sampler.temperature = *a.temperature;
  if (a.candidates) cfg.sampler.n_candidates = *a.candidates;
  if (a.cosine_sampler) {
    if (*a.cosine_sampler == "topk") {
      cfg.sampler.cosine = CosineSampling::kTopKSoftmax;
    } else if (*a.cosine_sampler == "proportional") {
      cfg.sampler.cosine = CosineSampling::kProportional;
    } else {
      fail(ErrorCode::kInvalidArgument, "unknown cosine sampler '" + *a.cosine_sampler + "'");
    }
  }
  if (a.epochs) cfg.matcher.epochs = *a.epochs;
  if (a.freeze_negatives) cfg.sampler.resample_each_epoch = false;
  cfg.sampler.validate();
  const ModelBundle scorer = load_bundle(a.scorer);
  const DatasetSplit split = read_split(a.data);
  const MatcherModel matcher =
      train_pipeline_matcher(split, *scorer.scorer, scorer.ontology, cfg, common.seed);
  save_xtars_bundle(a.out, a.scorer, matcher, cfg.sampler);
  log_event(LogLevel::kInfo, "train-matcher",
            {{"out", a.out},
             {"selected_epoch", matcher.summary().selected_epoch},
             {"validation_accuracy", matcher.summary().validation_accuracy}});
}

// --- predict ---------------------------------------------------------------

struct PredictArgs {
  std::string model;
  std::string input;
  std::vector<std::string> rts;
  std::string out;
  std::string confidence = "auto";
};

void run_predict(const Common& common, const PredictArgs& a) {
  const PipelineConfig cfg = load(common);
  auto bundle = std::make_shared<const ModelBundle>(load_bundle(a.model));
  const ConfidenceSource source = parse_confidence_source(a.confidence);
  std::ofstream file;
  if (!a.out.empty()) {
    file.open(a.out, std::ios::binary);
    if (!file) fail(ErrorCode::kIo, "cannot write " + a.out);
  }
  std::ostream& out = a.out.empty() ? std::cout : file;
  if (!a.input.empty()) {
    require_file(a.input, "input records");
    const auto records = read_records_jsonl_file(a.input);
    for (const Prediction& p : predict_records(*bundle, records, source)) {
      nlohmann::ordered_json j{{"id", p.record_id},
                               {"llt_code", p.llt_code},
                               {"pt_code", std::string(bundle->ontology.pt_of(p.llt_code).code)},
                               {"confidence", p.confidence},
                               {"entropy", p.entropy},
                               {"model", p.model_tag}};
      out << j.dump() << '\n';
    }
  }
  const PredictionService service(bundle, cfg.serve);
  for (const std::string& rt : a.rts) out << service.propose(rt).dump() << '\n';
}

// --- evaluate --------------------------------------------------------------

struct EvaluateArgs {
  std::vector<std::string> models;
  std::string data;
  std::string split = "test";
  std::string reports = "table2,tableA1,backtest";
  std::vector<double> thresholds;
  std::string brackets;
  std::string confidence;
  std::string bracket_reference;
  std::string out;
};

void run_evaluate(const Common& common, const EvaluateArgs& a) {
  const PipelineConfig cfg = load(common);
  if (a.models.empty()) fail(ErrorCode::kIo, "missing model artifact: pass --model <bundle dir>");
  for (const std::string& m : a.models) {
    require_file((fs::path(m) / "bundle.json").string(), "model artifact");
  }
  const DatasetSplit split = read_split(a.data);
  const std::vector<CodedRecord>* records = nullptr;
  if (a.split == "test") {
    records = &split.test;
  } else if (a.split == "validation") {
    records = &split.validation;
  } else {
    fail(ErrorCode::kInvalidArgument, "--split must be test or validation");
  }

  EvalOptions options;
  options.table2 = false;
  options.table_a1 = false;
  bool want_backtest = false;
  for (const std::string& r : split_list(a.reports)) {
    if (r == "table2") {
      options.table2 = true;
    } else if (r == "tableA1") {
      options.table_a1 = true;
    } else if (r == "backtest") {
      want_backtest = true;
    } else {
      fail(ErrorCode::kInvalidArgument, "unknown report '" + r + "'");
    }
  }
  options.brackets = cfg.ensemble.brackets;
  if (!a.brackets.empty()) {
    const auto f = parse_fractions(a.brackets);
    if (f.size() != 3) fail(ErrorCode::kInvalidArgument, "--brackets takes three fractions");
    options.brackets = {f[0], f[1], f[2]};
  }
  options.thresholds.clear();
  if (want_backtest) {
    options.thresholds = a.thresholds.empty() ? std::vector<double>{cfg.eval.threshold}
                                              : a.thresholds;
  }
  options.confidence =
      a.confidence.empty() ? cfg.eval.confidence : parse_confidence_source(a.confidence);

  std::optional<ModelBundle> reference;
  if (!a.bracket_reference.empty()) {
    reference.emplace(load_bundle(a.bracket_reference));
    options.bracket_reference = reference->scorer.get();
  }

  std::vector<EvalReport> reports;
  for (const std::string& m : a.models) {
    const ModelBundle bundle = load_bundle(m);
    reports.push_back(evaluate_bundle(bundle, *records, split.class_counts, options));
  }

  nlohmann::ordered_json j;
  j["split"] = a.split;
  j["records"] = records->size();
  j["reports"] = nlohmann::ordered_json::array();
  for (const EvalReport& r : reports) j["reports"].push_back(to_json(r));

  std::string text;
  if (options.table2) text += render_table2(reports) + "\n";
  if (options.table_a1) text += render_table_a1(reports) + "\n";
  if (want_backtest) text += render_backtest(reports);

  if (a.out.empty()) {
    std::cout << text;
  } else {
    fs::create_directories(a.out);
    write_json_file((fs::path(a.out) / "report.json").string(), j);
    write_text_file((fs::path(a.out) / "report.txt").string(), text);
    std::cout << text;
  }
}

// --- serve -----------------------------------------------------------------

struct ServeArgs {
  std::string model;
  std::optional<std::string> host;
  std::optional<int> port;
  std::optional<std::size_t> max_batch;
};

void run_serve(const Common& common, const ServeArgs& a) {
  PipelineConfig cfg = load(common);
  std::string model = a.model;
  if (model.empty()) {
    const char* env = std::getenv("XTARS_MODEL_DIR");
    if (env == nullptr || *env == '\0') {
      fail(ErrorCode::kInvalidArgument, "no model: pass --model or set XTARS_MODEL_DIR");
    }
    model = env;
  }
  if (a.host) cfg.serve.host = *a.host;
  if (a.port) cfg.serve.port = *a.port;
  if (a.max_batch) cfg.serve.max_batch = *a.max_batch;
  auto bundle = std::make_shared<const ModelBundle>(load_bundle(model));
  log_event(LogLevel::kInfo, "model-loaded",
            {{"model", model}, {"model_version", bundle->model_version}});
  auto service = std::make_shared<const PredictionService>(bundle, cfg.serve);
  HttpServer server(service);
  server.listen(cfg.serve.host, cfg.serve.port);
}

int report_error(const std::string& code, const std::string& message) {
  nlohmann::ordered_json j{{"error", code}, {"message", message}};
  std::cerr << j.dump() << std::endl;
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"xtars: candidate pruning and pair re-scoring for ontology coding"};
  app.require_subcommand(1);
  Common common;

  GenOntologyArgs gen_ont;
  auto* c_gen_ont = app.add_subcommand("gen-ontology", "Generate a synthetic ontology CSV");
  add_common(c_gen_ont, common);
  c_gen_ont->add_option("--num-llt", gen_ont.num_llt, "Number of LLTs");
  c_gen_ont->add_option("--num-pt", gen_ont.num_pt, "Number of PTs");
  c_gen_ont->add_option("--ontology-version", gen_ont.version, "Version tag");
  c_gen_ont->add_option("--out", gen_ont.out, "Output CSV")->required();

  GenCorpusArgs gen_corpus;
  auto* c_gen_corpus = app.add_subcommand("gen-corpus", "Generate a synthetic record corpus");
  add_common(c_gen_corpus, common);
  c_gen_corpus->add_option("--ontology", gen_corpus.ontology, "Ontology CSV")->required();
  c_gen_corpus->add_option("--ontology-version", gen_corpus.version, "Version tag");
  c_gen_corpus->add_option("--num-records", gen_corpus.num_records, "Number of records");
  c_gen_corpus->add_option("--out", gen_corpus.out, "Output JSONL")->required();

  IngestArgs ingest_args;
  auto* c_ingest = app.add_subcommand("ingest", "Filter, preprocess and augment records");
  add_common(c_ingest, common);
  c_ingest->add_option("--ontology", ingest_args.ontology, "Ontology CSV")->required();
  c_ingest->add_option("--ontology-version", ingest_args.version, "Version tag");
  c_ingest->add_option("--input", ingest_args.input, "Records JSONL")->required();
  c_ingest->add_option("--out", ingest_args.out, "Output directory")->required();

  SplitArgs split_args;
  auto* c_split = app.add_subcommand("split", "Build train/validation/test splits");
  add_common(c_split, common);
  c_split->add_option("--input", split_args.input, "Ingest directory")->required();
  c_split->add_option("--out", split_args.out, "Output directory")->required();

  TrainArgs clf_args;
  auto* c_clf = app.add_subcommand("train-classifier", "Train one softmax classifier");
  add_common(c_clf, common);
  c_clf->add_option("--data", clf_args.data, "Split directory")->required();
  c_clf->add_option("--ontology", clf_args.ontology, "Ontology CSV")->required();
  c_clf->add_option("--ontology-version", clf_args.version, "Version tag");
  c_clf->add_option("--epochs", clf_args.epochs, "Training epochs");
  c_clf->add_option("--out", clf_args.out, "Bundle directory")->required();

  TrainArgs ens_args;
  auto* c_ens = app.add_subcommand("train-ensemble", "Train a deep ensemble of classifiers");
  add_common(c_ens, common);
  c_ens->add_option("--data", ens_args.data, "Split directory")->required();
  c_ens->add_option("--ontology", ens_args.ontology, "Ontology CSV")->required();
  c_ens->add_option("--ontology-version", ens_args.version, "Version tag");
  c_ens->add_option("--epochs", ens_args.epochs, "Training epochs per member");
  c_ens->add_option("--out", ens_args.out, "Bundle directory")->required();

  MatcherArgs m_args;
  auto* c_m = app.add_subcommand("train-matcher", "Train the pair matcher on a scorer bundle");
  add_common(c_m, common);
  c_m->add_option("--data", m_args.data, "Split directory")->required();
  c_m->add_option("--scorer", m_args.scorer, "Classifier or ensemble bundle")->required();
  c_m->add_option("--out", m_args.out, "Bundle directory")->required();
  c_m->add_option("--neg-strategy", m_args.neg_strategy, "cos, top5 or top5+cos");
  c_m->add_option("--neg", m_args.neg, "Cosine negatives per positive");
  c_m->add_option("--temperature", m_args.temperature, "Softmax temperature")
      ->check(CLI::PositiveNumber);
  c_m->add_option("--candidates", m_args.candidates, "Candidates scored at prediction")
      ->check(CLI::PositiveNumber);
  c_m->add_option("--cosine-sampler", m_args.cosine_sampler, "topk or proportional");
  c_m->add_option("--epochs", m_args.epochs, "Training epochs");
  c_m->add_flag("--freeze-negatives", m_args.freeze_negatives,
                "Draw cosine negatives once instead of every epoch");

  PredictArgs p_args;
  auto* c_p = app.add_subcommand("predict", "Predict codes for records or raw text");
  add_common(c_p, common);
  c_p->add_option("--model", p_args.model, "Bundle directory")->required();
  c_p->add_option("--input", p_args.input, "Records JSONL");
  c_p->add_option("--rt", p_args.rts, "Reported term (repeatable)");
  c_p->add_option("--out", p_args.out, "Output JSONL (default stdout)");
  c_p->add_option("--confidence-source", p_args.confidence, "auto, distribution or matcher");

  EvaluateArgs e_args;
  auto* c_e = app.add_subcommand("evaluate", "Accuracy, bracket, frequency and backtest reports");
  add_common(c_e, common);
  c_e->add_option("--model", e_args.models, "Bundle directory (repeatable)");
  c_e->add_option("--data", e_args.data, "Split directory")->required();
  c_e->add_option("--split", e_args.split, "test or validation");
  c_e->add_option("--report", e_args.reports, "Comma list of table2, tableA1, backtest");
  c_e->add_option("--threshold", e_args.thresholds, "Backtest confidence threshold (repeatable)");
  c_e->add_option("--brackets", e_args.brackets, "Certain, uncertain, tail fractions");
  c_e->add_option("--confidence-source", e_args.confidence, "auto, distribution or matcher");
  c_e->add_option("--bracket-reference", e_args.bracket_reference,
                  "Bundle whose entropies define the brackets for every row");
  c_e->add_option("--out", e_args.out, "Report directory");

  ServeArgs s_args;
  auto* c_s = app.add_subcommand("serve", "Serve POST /predict and GET /health");
  add_common(c_s, common);
  c_s->add_option("--model", s_args.model, "Bundle directory (default $XTARS_MODEL_DIR)");
  c_s->add_option("--host", s_args.host, "Bind address");
  c_s->add_option("--port", s_args.port, "Port");
  c_s->add_option("--max-batch", s_args.max_batch, "Largest accepted batch");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    report_error("usage_error", e.what());
    return 2;
  }

  try {
    if (c_gen_ont->parsed()) run_gen_ontology(common, gen_ont);
    else if (c_gen_corpus->parsed()) run_gen_corpus(common, gen_corpus);
    else if (c_ingest->parsed()) run_ingest(common, ingest_args);
    else if (c_split->parsed()) run_split(common, split_args);
    else if (c_clf->parsed()) run_train_classifier(common, clf_args);
    else if (c_ens->parsed()) run_train_ensemble(common, ens_args);
    else if (c_m->parsed()) run_train_matcher(common, m_args);
    else if (c_p->parsed()) run_predict(common, p_args);
    else if (c_e->parsed()) run_evaluate(common, e_args);
    else if (c_s->parsed()) run_serve(common, s_args);
  } catch (const Error& e) {
    return report_error(error_code_name(e.code()), e.what());
  } catch (const std::exception& e) {
    return report_error("internal_error", e.what());
  }
  return 0;
}
