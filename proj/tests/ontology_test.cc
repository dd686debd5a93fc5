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

#include <map>
#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "test_support.h"
#include "xtars/error.h"
#include "xtars/ontology.h"

namespace xtars {
namespace {

Ontology parse(const std::string& csv_text) {
  std::istringstream in(csv_text);
  return read_ontology_csv(in, "v1");
}

constexpr char kHeader[] = "llt_code,llt_name,pt_code,pt_name\n";

TEST(OntologyLoadTest, SingleRowIsLowercasedEntry) {
  const Ontology ont = parse(std::string(kHeader) + "llt001,Lethargy,pt001,LETHARGY\n");
  ASSERT_EQ(ont.size(), 1u);
  EXPECT_EQ(ont.at("llt001").llt_name, "lethargy");
  EXPECT_EQ(ont.at("llt001").pt_name, "lethargy");
  EXPECT_EQ(ont.version(), "v1");
}

TEST(OntologyLoadTest, HeaderOnlyIsEmptyOntology) {
  const Ontology ont = parse(kHeader);
  EXPECT_TRUE(ont.empty());
  EXPECT_EQ(ont.version(), "v1");
}

TEST(OntologyLoadTest, QuotedCommaInName) {
  const Ontology ont =
      parse(std::string(kHeader) + "llt9,\"pain, leg\",pt9,pain in extremity\n");
  EXPECT_EQ(ont.at("llt9").llt_name, "pain, leg");
}

TEST(OntologyLoadTest, ConflictingPtForSameLltIsError) {
  EXPECT_THROW(parse(std::string(kHeader) + "llt1,a,pt1,x\nllt1,a,pt2,y\n"), Error);
}

TEST(OntologyLoadTest, DuplicateLltIsError) {
  EXPECT_THROW(parse(std::string(kHeader) + "llt1,a,pt1,x\nllt1,a,pt1,x\n"), Error);
}

TEST(OntologyLoadTest, EmptyNameIsError) {
  EXPECT_THROW(parse(std::string(kHeader) + "llt1,  ,pt1,x\n"), Error);
  EXPECT_THROW(parse(std::string(kHeader) + "llt1,a,pt1,\n"), Error);
}

TEST(OntologyLoadTest, PtWithTwoNamesIsError) {
  EXPECT_THROW(parse(std::string(kHeader) + "llt1,a,pt1,x\nllt2,b,pt1,y\n"), Error);
}

TEST(OntologyLoadTest, WrongHeaderIsParseError) {
  try {
    parse("code,name\nllt1,a\n");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kParse);
  }
}

TEST(OntologyLoadTest, SaveLoadRoundTrip) {
  testing::TempDir dir;
  const Ontology ont = testing::clinical_ontology();
  save_ontology(dir.file("o.csv"), ont);
  const Ontology back = load_ontology(dir.file("o.csv"), "test");
  ASSERT_EQ(back.size(), ont.size());
  for (std::size_t i = 0; i < ont.size(); ++i) EXPECT_EQ(back.entries()[i], ont.entries()[i]);
}

TEST(PtOfTest, TableOneMappings) {
  const Ontology ont = testing::clinical_ontology();
  EXPECT_EQ(ont.pt_of("llt005").name, "pain in extremity");
  EXPECT_EQ(ont.pt_of("llt007").name, "gangrene");
  EXPECT_EQ(ont.pt_of("llt004").name, "chronic kidney disease");
}

TEST(PtOfTest, UnknownCodeIsLookupError) {
  const Ontology ont = testing::clinical_ontology();
  EXPECT_THROW(ont.pt_of("llt999"), LookupError);
  EXPECT_FALSE(ont.contains("llt999"));
}

TEST(OntologyToRecordsTest, SingleEntryGivesThreeRecords) {
  const Ontology ont("v", {{"llt001", "lethargy", "pt001", "lethargy"}});
  const auto records = ontology_to_records(ont, 1);
  ASSERT_EQ(records.size(), 3u);
  int verbatim = 0;
  for (const CodedRecord& r : records) {
    EXPECT_EQ(r.llt_code, "llt001");
    if (r.source == Source::kOntology) {
      ++verbatim;
      EXPECT_EQ(r.rt, "lethargy");
      EXPECT_FALSE(r.origin_id.has_value());
    } else {
      EXPECT_EQ(r.source, Source::kAugmented);
      ASSERT_TRUE(r.origin_id.has_value());
      EXPECT_EQ(*r.origin_id, "ont:llt001");
      EXPECT_EQ(testing::edit_distance(r.rt, "lethargy"), 1u);
    }
  }
  EXPECT_EQ(verbatim, 1);
}

TEST(OntologyToRecordsTest, VariantsFollowOperatorShape) {
  const Ontology ont = testing::clinical_ontology();
  const auto records = ontology_to_records(ont, 11);
  ASSERT_EQ(records.size(), 3 * ont.size());
  for (const CodedRecord& r : records) {
    ASSERT_TRUE(ont.contains(r.llt_code));
    const std::string& name = ont.at(r.llt_code).llt_name;
    if (r.id.ends_with(":split")) {
      std::string a = name, b = r.rt;
      std::sort(a.begin(), a.end());
      a.push_back(' ');
      std::sort(a.begin(), a.end());
      std::sort(b.begin(), b.end());
      EXPECT_EQ(a, b) << r.rt;
    } else if (r.id.ends_with(":char")) {
      ASSERT_EQ(r.rt.size(), name.size());
      std::size_t diffs = 0;
      for (std::size_t i = 0; i < name.size(); ++i) diffs += name[i] != r.rt[i];
      EXPECT_EQ(diffs, 1u);
    }
  }
}

TEST(SyntheticOntologyTest, Minimal) {
  const Ontology ont = generate_synthetic_ontology(1, 1, 3);
  EXPECT_EQ(ont.size(), 1u);
  EXPECT_EQ(ont.pt_count(), 1u);
}

TEST(SyntheticOntologyTest, DeterministicBytes) {
  std::ostringstream a, b;
  write_ontology_csv(a, generate_synthetic_ontology(500, 150, 7));
  write_ontology_csv(b, generate_synthetic_ontology(500, 150, 7));
  EXPECT_EQ(a.str(), b.str());
  std::ostringstream c;
  write_ontology_csv(c, generate_synthetic_ontology(500, 150, 8));
  EXPECT_NE(a.str(), c.str());
}

TEST(SyntheticOntologyTest, ShapeAndSiblingsShareTokens) {
  const Ontology ont = generate_synthetic_ontology(500, 150, 7);
  EXPECT_EQ(ont.size(), 500u);
  EXPECT_EQ(ont.pt_count(), 150u);
  std::map<std::string, std::vector<std::string>> by_pt;
  std::set<std::string> names;
  for (const LltEntry& e : ont.entries()) {
    by_pt[e.pt_code].push_back(e.llt_name);
    names.insert(e.llt_name);
    EXPECT_NE(e.llt_name.find(' '), std::string::npos) << "single-token name " << e.llt_name;
  }
  EXPECT_EQ(names.size(), 500u);
  EXPECT_EQ(by_pt.size(), 150u);
  std::size_t multi = 0;
  for (const auto& [pt, llts] : by_pt) {
    if (llts.size() >= 2) ++multi;
  }
  EXPECT_GE(multi, 1u);
}

TEST(SyntheticOntologyTest, MorePtsThanLltsIsError) {
  EXPECT_THROW(generate_synthetic_ontology(3, 4, 1), Error);
}

}  // namespace
}  // namespace xtars
