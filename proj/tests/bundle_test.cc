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

#include <gtest/gtest.h>

#include "test_support.h"
#include "xtars/bundle.h"
#include "xtars/error.h"

namespace xtars {
namespace {

namespace fs = std::filesystem;

class BundleTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    dir_ = new testing::TempDir();
    pipeline_ = new testing::SmallPipeline(testing::build_small_pipeline(dir_->path()));
  }
  static void TearDownTestSuite() {
    delete pipeline_;
    delete dir_;
  }

  static testing::TempDir* dir_;
  static testing::SmallPipeline* pipeline_;
};

testing::TempDir* BundleTest::dir_ = nullptr;
testing::SmallPipeline* BundleTest::pipeline_ = nullptr;

void copy_tree(const std::string& from, const std::string& to) {
  fs::copy(from, to, fs::copy_options::recursive);
}

void append_byte(const fs::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::app);
  out << 'x';
}

TEST_F(BundleTest, LoadsBothKinds) {
  const ModelBundle ens = load_bundle(pipeline_->ensemble_dir);
  EXPECT_FALSE(ens.is_xtars());
  EXPECT_EQ(ens.scorer_kind, ScorerKind::kEnsemble);
  EXPECT_EQ(ens.model_tag(), "ensemble");
  EXPECT_EQ(ens.model_version.size(), 16u);
  EXPECT_EQ(ens.ontology.size(), pipeline_->ontology.size());

  const ModelBundle xt = load_bundle(pipeline_->xtars_dir);
  EXPECT_TRUE(xt.is_xtars());
  EXPECT_EQ(xt.model_tag(), "xtars(neg=top-5+5 cos; T=0.01)");
  EXPECT_NE(xt.model_version, ens.model_version);
  EXPECT_EQ(xt.sampler.n_candidates, 5u);
}

TEST_F(BundleTest, ReloadPredictsIdentically) {
  const ModelBundle a = load_bundle(pipeline_->xtars_dir);
  const ModelBundle b = load_bundle(pipeline_->xtars_dir);
  EXPECT_EQ(a.model_version, b.model_version);
  for (std::size_t i = 0; i < 20 && i < pipeline_->split.test.size(); ++i) {
    const auto& rt = pipeline_->split.test[i].rt;
    const PipelineOutput x = run_pipeline(a, rt);
    const PipelineOutput y = run_pipeline(b, rt);
    EXPECT_EQ(x.llt_code, y.llt_code);
    EXPECT_EQ(x.match_score, y.match_score);
    EXPECT_EQ(x.entropy, y.entropy);
  }
}

TEST_F(BundleTest, MissingManifestNamesArtifact) {
  testing::TempDir empty;
  try {
    load_bundle(empty.path());
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kIo);
    EXPECT_NE(std::string(e.what()).find("bundle.json"), std::string::npos);
  }
}

TEST_F(BundleTest, TamperedFilesDetected) {
  for (const char* rel : {"ontology.csv", "scorer/ensemble.json", "matcher/manifest.json",
                          "matcher/weights.bin"}) {
    testing::TempDir copy;
    const std::string target = copy.path() + "/b";
    copy_tree(pipeline_->xtars_dir, target);
    append_byte(fs::path(target) / rel);
    try {
      load_bundle(target);
      ADD_FAILURE() << "tampered " << rel << " was accepted";
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kIntegrity) << rel << ": " << e.what();
    }
  }
}

TEST_F(BundleTest, TamperedMemberWeightsDetected) {
  testing::TempDir copy;
  const std::string target = copy.path() + "/b";
  copy_tree(pipeline_->ensemble_dir, target);
  bool tampered = false;
  for (const auto& entry : fs::recursive_directory_iterator(fs::path(target) / "scorer")) {
    if (entry.path().filename() == "weights.bin") {
      append_byte(entry.path());
      tampered = true;
      break;
    }
  }
  ASSERT_TRUE(tampered);
  EXPECT_THROW(load_bundle(target), Error);
}

TEST_F(BundleTest, AccuracyBoundedByCandidateRecall) {
  ModelBundle bundle = load_bundle(pipeline_->xtars_dir);
  const auto& test = pipeline_->split.test;
  ASSERT_FALSE(test.empty());
  for (std::size_t n : {1u, 5u, 10u}) {
    bundle.sampler.n_candidates = n;
    const auto preds = predict_records(bundle, test, ConfidenceSource::kAuto);
    std::size_t hits = 0;
    for (std::size_t i = 0; i < test.size(); ++i) hits += preds[i].llt_code == test[i].llt_code;
    const double acc = static_cast<double>(hits) / static_cast<double>(test.size());
    EXPECT_LE(acc, candidate_recall(*bundle.scorer, test, n)) << "n=" << n;
  }
}

TEST_F(BundleTest, SingleCandidateEqualsScorerArgmax) {
  ModelBundle xt = load_bundle(pipeline_->xtars_dir);
  xt.sampler.n_candidates = 1;
  const ModelBundle ens = load_bundle(pipeline_->ensemble_dir);
  for (const auto& r : pipeline_->split.test) {
    EXPECT_EQ(run_pipeline(xt, r.rt).llt_code, run_pipeline(ens, r.rt).llt_code);
  }
}

TEST_F(BundleTest, ConfidenceSources) {
  const ModelBundle xt = load_bundle(pipeline_->xtars_dir);
  const ModelBundle ens = load_bundle(pipeline_->ensemble_dir);
  const std::string rt = pipeline_->split.test.front().rt;
  const PipelineOutput x = run_pipeline(xt, rt);
  ASSERT_TRUE(x.match_score.has_value());
  EXPECT_EQ(select_confidence(x, ConfidenceSource::kAuto), *x.match_score);
  EXPECT_EQ(select_confidence(x, ConfidenceSource::kDistribution), x.distribution_confidence);
  const PipelineOutput e = run_pipeline(ens, rt);
  EXPECT_EQ(select_confidence(e, ConfidenceSource::kAuto), e.distribution_confidence);
  EXPECT_THROW(select_confidence(e, ConfidenceSource::kMatcher), Error);
  EXPECT_GE(e.entropy, 0.0);
}

TEST_F(BundleTest, EvaluateBundleReport) {
  const ModelBundle xt = load_bundle(pipeline_->xtars_dir);
  EvalOptions options;
  options.thresholds = {0.0, 0.5, 1.01};
  const EvalReport r =
      evaluate_bundle(xt, pipeline_->split.test, pipeline_->split.class_counts, options);
  ASSERT_TRUE(r.brackets.has_value());
  ASSERT_TRUE(r.frequency.has_value());
  ASSERT_TRUE(r.candidate_recall.has_value());
  EXPECT_EQ(r.candidate_n, 5u);
  EXPECT_EQ(r.brackets->all.count, pipeline_->split.test.size());
  EXPECT_LE(*r.brackets->all.llt_accuracy(), *r.candidate_recall);
  ASSERT_EQ(r.backtests.size(), 3u);
  EXPECT_EQ(r.backtests[0].coverage, 1.0);
  EXPECT_EQ(r.backtests[2].coverage, 0.0);
  const auto again =
      evaluate_bundle(xt, pipeline_->split.test, pipeline_->split.class_counts, options);
  EXPECT_EQ(to_json(r).dump(), to_json(again).dump());
}

TEST_F(BundleTest, SharedBracketReference) {
  const ModelBundle xt = load_bundle(pipeline_->xtars_dir);
  const ModelBundle ens = load_bundle(pipeline_->ensemble_dir);
  EvalOptions options;
  options.bracket_reference = ens.scorer.get();
  const auto preds = predict_records(xt, pipeline_->split.test, ConfidenceSource::kAuto);
  const EvalReport a =
      evaluate_bundle(xt, pipeline_->split.test, pipeline_->split.class_counts, options);
  const EvalReport b =
      evaluate_bundle(ens, pipeline_->split.test, pipeline_->split.class_counts, options);
  EXPECT_EQ(a.brackets->bottom_tail.count, b.brackets->bottom_tail.count);
  EXPECT_FALSE(preds.empty());
}

}  // namespace
}  // namespace xtars
