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

#include "xtars/config.h"

#include <fstream>
#include <set>

#include "xtars/artifact.h"
#include "xtars/error.h"

namespace xtars {

NegativeStrategy parse_negative_strategy(std::string_view name) {
  if (name == "cos") return NegativeStrategy::kCos;
  if (name == "top5") return NegativeStrategy::kTop5;
  if (name == "top5+cos") return NegativeStrategy::kTop5PlusCos;
  fail(ErrorCode::kInvalidArgument,
       "unknown negative strategy '" + std::string(name) + "' (cos|top5|top5+cos)");
}

std::string_view negative_strategy_name(NegativeStrategy strategy) {
  switch (strategy) {
    case NegativeStrategy::kCos: return "cos";
    case NegativeStrategy::kTop5: return "top5";
    case NegativeStrategy::kTop5PlusCos: return "top5+cos";
  }
  return "unknown";
}

void apply_negative_strategy(NegativeStrategy strategy, SamplerConfig& sampler) {
  sampler.use_clf_top = strategy != NegativeStrategy::kCos;
  if (strategy == NegativeStrategy::kTop5) sampler.neg = 0;
}

ConfidenceSource parse_confidence_source(std::string_view name) {
  if (name == "auto") return ConfidenceSource::kAuto;
  if (name == "distribution") return ConfidenceSource::kDistribution;
  if (name == "matcher") return ConfidenceSource::kMatcher;
  fail(ErrorCode::kInvalidArgument, "unknown confidence source '" + std::string(name) +
                                        "' (auto|distribution|matcher)");
}

namespace {

using json = nlohmann::json;

// Reads only the listed keys and rejects anything else in the section.
class Section {
 public:
  Section(const json& j, std::string name) : j_(j), name_(std::move(name)) {
    if (!j_.is_object()) fail(ErrorCode::kParse, "config: section '" + name_ + "' must be an object");
  }
  ~Section() = default;

  template <typename T>
  void read(const char* key, T& out) {
    seen_.insert(key);
    if (!j_.contains(key)) return;
    try {
      out = j_.at(key).get<T>();
    } catch (const json::exception& e) {
      fail(ErrorCode::kParse, "config: " + name_ + "." + key + ": " + e.what());
    }
  }

  bool has(const char* key) {
    seen_.insert(key);
    return j_.contains(key);
  }
  const json& at(const char* key) const { return j_.at(key); }

  void finish() const {
    for (const auto& [key, value] : j_.items()) {
      if (!seen_.contains(key)) {
        fail(ErrorCode::kParse, "config: unknown key '" + name_ + "." + key + "'");
      }
    }
  }

 private:
  const json& j_;
  std::string name_;
  std::set<std::string> seen_;
};

void read_featurizer(Section& s, FeaturizerConfig& f) {
  s.read("ngram_sizes", f.ngram_sizes);
  s.read("word_unigrams", f.word_unigrams);
  s.read("dim", f.dim);
  s.read("hash_seed", f.hash_seed);
  require(f.dim > 0, "config: featurizer.dim must be positive");
}

void read_sampler(Section& s, SamplerConfig& c) {
  s.read("neg", c.neg);
  s.read("k_multiplier", c.k_multiplier);
  s.read("temperature", c.temperature);
  s.read("use_clf_top", c.use_clf_top);
  s.read("n_candidates", c.n_candidates);
  s.read("resample_each_epoch", c.resample_each_epoch);
  if (s.has("cosine_sampler")) {
    const std::string name = s.at("cosine_sampler").get<std::string>();
    if (name == "topk_softmax") {
      c.cosine = CosineSampling::kTopKSoftmax;
    } else if (name == "proportional") {
      c.cosine = CosineSampling::kProportional;
    } else {
      fail(ErrorCode::kParse, "config: cosine_sampler must be topk_softmax or proportional");
    }
  }
  // Applied last so that "top5" wins over an explicit neg.
  if (s.has("neg_strategy")) {
    apply_negative_strategy(parse_negative_strategy(s.at("neg_strategy").get<std::string>()), c);
  }
}

}  // namespace

nlohmann::ordered_json featurizer_to_json(const FeaturizerConfig& config) {
  return {{"ngram_sizes", config.ngram_sizes},
          {"word_unigrams", config.word_unigrams},
          {"dim", config.dim},
          {"hash_seed", config.hash_seed}};
}

FeaturizerConfig featurizer_from_json(const nlohmann::json& j) {
  FeaturizerConfig f;
  Section s(j, "featurizer");
  read_featurizer(s, f);
  s.finish();
  return f;
}

nlohmann::ordered_json sampler_to_json(const SamplerConfig& c) {
  return {{"neg", c.neg},
          {"k_multiplier", c.k_multiplier},
          {"temperature", c.temperature},
          {"use_clf_top", c.use_clf_top},
          {"n_candidates", c.n_candidates},
          {"cosine_sampler",
           c.cosine == CosineSampling::kTopKSoftmax ? "topk_softmax" : "proportional"},
          {"resample_each_epoch", c.resample_each_epoch}};
}

SamplerConfig sampler_from_json(const nlohmann::json& j) {
  SamplerConfig c;
  Section s(j, "sampler");
  read_sampler(s, c);
  s.finish();
  c.validate();
  return c;
}

PipelineConfig config_from_json(const nlohmann::json& j) {
  PipelineConfig c;
  Section root(j, "config");
  if (root.has("featurizer")) {
    Section s(j.at("featurizer"), "featurizer");
    read_featurizer(s, c.featurizer);
    s.finish();
  }
  c.classifier.featurizer = c.featurizer;
  if (root.has("corpus")) {
    Section s(j.at("corpus"), "corpus");
    s.read("rare_threshold", c.corpus.rare_threshold);
    s.read("test_fraction", c.corpus.test_fraction);
    s.read("val_fraction", c.corpus.val_fraction);
    s.read("xtars_val_cap", c.corpus.xtars_val_cap);
    s.finish();
  }
  if (root.has("classifier")) {
    Section s(j.at("classifier"), "classifier");
    s.read("epochs", c.classifier.epochs);
    s.read("batch_size", c.classifier.batch_size);
    s.read("learning_rate", c.classifier.learning_rate);
    s.read("beta1", c.classifier.beta1);
    s.read("beta2", c.classifier.beta2);
    s.read("epsilon", c.classifier.epsilon);
    s.read("init_scale", c.classifier.init_scale);
    s.finish();
  }
  if (root.has("ensemble")) {
    Section s(j.at("ensemble"), "ensemble");
    s.read("seeds", c.ensemble.seeds);
    if (s.has("brackets")) {
      const auto b = s.at("brackets").get<std::vector<double>>();
      require(b.size() == 3, "config: ensemble.brackets needs three fractions");
      c.ensemble.brackets = {b[0], b[1], b[2]};
    }
    s.finish();
  }
  c.matcher.features.text.ngram_sizes = c.featurizer.ngram_sizes;
  c.matcher.features.text.hash_seed = c.featurizer.hash_seed;
  if (root.has("matcher")) {
    Section s(j.at("matcher"), "matcher");
    read_sampler(s, c.sampler);
    s.read("epochs", c.matcher.epochs);
    s.read("batch_size", c.matcher.batch_size);
    s.read("learning_rate", c.matcher.learning_rate);
    s.read("validation_records", c.matcher.validation_records);
    s.read("dim", c.matcher.features.text.dim);
    s.read("block_weight", c.matcher.features.block_weight);
    s.finish();
  }
  if (root.has("eval")) {
    Section s(j.at("eval"), "eval");
    s.read("threshold", c.eval.threshold);
    if (s.has("confidence_source")) {
      c.eval.confidence = parse_confidence_source(s.at("confidence_source").get<std::string>());
    }
    s.finish();
  }
  if (root.has("serve")) {
    Section s(j.at("serve"), "serve");
    s.read("host", c.serve.host);
    s.read("port", c.serve.port);
    s.read("max_batch", c.serve.max_batch);
    s.read("entropy_threshold", c.serve.entropy_threshold);
    s.finish();
  }
  root.finish();
  c.sampler.validate();
  return c;
}

PipelineConfig load_config(const std::string& path) {
  return config_from_json(read_json_file(path));
}

nlohmann::ordered_json config_to_json(const PipelineConfig& c) {
  nlohmann::ordered_json j;
  j["featurizer"] = featurizer_to_json(c.featurizer);
  j["corpus"] = {{"rare_threshold", c.corpus.rare_threshold},
                 {"test_fraction", c.corpus.test_fraction},
                 {"val_fraction", c.corpus.val_fraction},
                 {"xtars_val_cap", c.corpus.xtars_val_cap}};
  j["classifier"] = {{"epochs", c.classifier.epochs},
                     {"batch_size", c.classifier.batch_size},
                     {"learning_rate", c.classifier.learning_rate},
                     {"beta1", c.classifier.beta1},
                     {"beta2", c.classifier.beta2},
                     {"epsilon", c.classifier.epsilon},
                     {"init_scale", c.classifier.init_scale}};
  j["ensemble"] = {{"seeds", c.ensemble.seeds},
                   {"brackets", {c.ensemble.brackets.certain, c.ensemble.brackets.uncertain,
                                 c.ensemble.brackets.uncertain_tail}}};
  nlohmann::ordered_json m = sampler_to_json(c.sampler);
  m["epochs"] = c.matcher.epochs;
  m["batch_size"] = c.matcher.batch_size;
  m["learning_rate"] = c.matcher.learning_rate;
  m["validation_records"] = c.matcher.validation_records;
  m["dim"] = c.matcher.features.text.dim;
  m["block_weight"] = c.matcher.features.block_weight;
  j["matcher"] = m;
  j["eval"] = {{"threshold", c.eval.threshold},
               {"confidence_source", c.eval.confidence == ConfidenceSource::kAuto ? "auto"
                                     : c.eval.confidence == ConfidenceSource::kMatcher
                                         ? "matcher"
                                         : "distribution"}};
  j["serve"] = {{"host", c.serve.host},
                {"port", c.serve.port},
                {"max_batch", c.serve.max_batch},
                {"entropy_threshold", c.serve.entropy_threshold}};
  return j;
}

}  // namespace xtars
