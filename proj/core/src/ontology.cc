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

#include "xtars/ontology.h"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <unordered_set>

#include "synthetic_vocab.h"
#include "xtars/csv.h"
#include "xtars/error.h"
#include "xtars/hashing.h"
#include "xtars/rng.h"
#include "xtars/text.h"
#include "xtars/text_noise.h"

namespace xtars {

Ontology::Ontology(std::string version, std::vector<LltEntry> entries)
    : version_(std::move(version)), entries_(std::move(entries)) {
  by_code_.reserve(entries_.size());
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    LltEntry& e = entries_[i];
    e.llt_code = std::string(trim(e.llt_code));
    e.pt_code = std::string(trim(e.pt_code));
    e.llt_name = normalize_text(e.llt_name);
    e.pt_name = normalize_text(e.pt_name);
    if (e.llt_code.empty() || e.pt_code.empty()) {
      fail(ErrorCode::kParse, "ontology entry " + std::to_string(i) +
                                  " has an empty code");
    }
    if (e.llt_name.empty() || e.pt_name.empty()) {
      fail(ErrorCode::kParse,
           "ontology entry '" + e.llt_code + "' has an empty name");
    }
    auto [it, inserted] = by_code_.emplace(e.llt_code, i);
    if (!inserted) {
      const LltEntry& prior = entries_[it->second];
      if (prior.pt_code != e.pt_code) {
        fail(ErrorCode::kParse, "llt_code '" + e.llt_code +
                                    "' maps to conflicting pt_codes '" +
                                    prior.pt_code + "' and '" + e.pt_code + "'");
      }
      fail(ErrorCode::kParse, "duplicate llt_code '" + e.llt_code + "'");
    }
    auto [pt, pt_inserted] = pt_names_.emplace(e.pt_code, e.pt_name);
    if (!pt_inserted && pt->second != e.pt_name) {
      fail(ErrorCode::kParse, "pt_code '" + e.pt_code +
                                  "' carries conflicting names '" +
                                  pt->second + "' and '" + e.pt_name + "'");
    }
  }
}

bool Ontology::contains(std::string_view llt_code) const {
  return find(llt_code) != nullptr;
}

const LltEntry* Ontology::find(std::string_view llt_code) const {
  auto it = by_code_.find(std::string(llt_code));
  return it == by_code_.end() ? nullptr : &entries_[it->second];
}

const LltEntry& Ontology::at(std::string_view llt_code) const {
  const LltEntry* e = find(llt_code);
  if (e == nullptr) {
    throw LookupError("llt_code '" + std::string(llt_code) +
                      "' is not in ontology version '" + version_ + "'");
  }
  return *e;
}

PtRef Ontology::pt_of(std::string_view llt_code) const {
  const LltEntry& e = at(llt_code);
  return PtRef{e.pt_code, e.pt_name};
}

Ontology read_ontology_csv(std::istream& in, std::string version) {
  auto header = csv::read_row(in);
  const std::vector<std::string> expected = {"llt_code", "llt_name", "pt_code",
                                             "pt_name"};
  if (!header) fail(ErrorCode::kParse, "ontology csv: missing header");
  for (auto& h : *header) h = std::string(trim(h));
  // Tolerate a UTF-8 byte order mark on the first column.
  if (!header->empty() && header->front().rfind("\xEF\xBB\xBF", 0) == 0) {
    header->front().erase(0, 3);
  }
  if (*header != expected) {
    fail(ErrorCode::kParse,
         "ontology csv: header must be llt_code,llt_name,pt_code,pt_name");
  }
  std::vector<LltEntry> entries;
  std::size_t row_no = 1;
  while (auto row = csv::read_row(in)) {
    ++row_no;
    if (row->size() == 1 && trim((*row)[0]).empty()) continue;
    if (row->size() != 4) {
      fail(ErrorCode::kParse, "ontology csv row " + std::to_string(row_no) +
                                  ": expected 4 fields, got " +
                                  std::to_string(row->size()));
    }
    entries.push_back(LltEntry{std::move((*row)[0]), std::move((*row)[1]),
                               std::move((*row)[2]), std::move((*row)[3])});
  }
  return Ontology(std::move(version), std::move(entries));
}

Ontology load_ontology(const std::string& path, std::string version) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kIo, "cannot open ontology file '" + path + "'");
  return read_ontology_csv(in, std::move(version));
}

void write_ontology_csv(std::ostream& out, const Ontology& ontology) {
  csv::write_row(out, {"llt_code", "llt_name", "pt_code", "pt_name"});
  for (const LltEntry& e : ontology.entries()) {
    csv::write_row(out, {e.llt_code, e.llt_name, e.pt_code, e.pt_name});
  }
}

void save_ontology(const std::string& path, const Ontology& ontology) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::kIo, "cannot write ontology file '" + path + "'");
  write_ontology_csv(out, ontology);
}

std::vector<CodedRecord> ontology_to_records(const Ontology& ontology,
                                             std::uint64_t seed) {
  require(!ontology.empty(), "ontology_to_records: ontology is empty");
  std::vector<CodedRecord> records;
  records.reserve(3 * ontology.size());
  for (const LltEntry& e : ontology.entries()) {
    Rng rng(derive_seed(seed, e.llt_code));
    const std::string origin = "ont:" + e.llt_code;
    records.push_back({origin, e.llt_name, e.llt_code, Source::kOntology,
                       std::nullopt, 0});
    records.push_back({origin + ":split", word_split(e.llt_name, rng),
                       e.llt_code, Source::kAugmented, origin, 0});
    records.push_back({origin + ":char", character_change(e.llt_name, rng),
                       e.llt_code, Source::kAugmented, origin, 0});
  }
  return records;
}

namespace {

std::string join(std::initializer_list<std::string_view> parts) {
  std::string out;
  for (std::string_view p : parts) {
    if (p.empty()) continue;
    if (!out.empty()) out.push_back(' ');
    out.append(p);
  }
  return out;
}

template <typename Container>
std::string_view pick(const Container& items, Rng& rng) {
  return items[rng.uniform_index(items.size())];
}

std::string padded_code(std::string_view prefix, std::size_t n,
                        std::size_t width) {
  std::string digits = std::to_string(n);
  if (digits.size() < width) digits.insert(0, width - digits.size(), '0');
  return std::string(prefix) + digits;
}

struct PtSeed {
  std::string modifier;  // empty for two-token names
  std::string anatomy;
  std::string condition;

  std::string name() const { return join({modifier, anatomy, condition}); }
};

std::vector<PtSeed> draw_pt_seeds(std::size_t num_pt, Rng& rng) {
  std::vector<PtSeed> pairs;
  for (auto a : vocab::kAnatomy) {
    for (auto c : vocab::kCondition) {
      pairs.push_back({"", std::string(a), std::string(c)});
    }
  }
  rng.shuffle(std::span(pairs));
  if (num_pt <= pairs.size()) {
    pairs.resize(num_pt);
    return pairs;
  }
  std::vector<PtSeed> triples;
  for (auto m : vocab::kModifier) {
    for (const PtSeed& p : pairs) {
      triples.push_back({std::string(m), p.anatomy, p.condition});
    }
  }
  rng.shuffle(std::span(triples));
  std::vector<PtSeed> out = pairs;
  for (std::size_t i = 0; out.size() < num_pt; ++i) {
    if (i < triples.size()) {
      out.push_back(triples[i]);
    } else {
      PtSeed s = triples[i % triples.size()];
      s.condition += " type " + std::to_string(i / triples.size() + 1);
      out.push_back(std::move(s));
    }
  }
  return out;
}

std::string_view synonym_of(std::string_view condition) {
  for (auto [word, alt] : vocab::kConditionSynonym) {
    if (word == condition) return alt;
  }
  return {};
}

std::string variant_name(const PtSeed& pt, Rng& rng) {
  const std::string base = pt.name();
  const std::string_view alt = synonym_of(pt.condition);
  switch (rng.uniform_index(7)) {
    case 0:
      return join({pick(vocab::kModifier, rng), base});
    case 1:
      return join({base, pick(vocab::kQualifier, rng)});
    case 2:
      return join({pick(vocab::kModifier, rng), base, pick(vocab::kQualifier, rng)});
    case 3:
      return join({pt.condition, "of", pt.modifier, pt.anatomy});
    case 4:
      if (!alt.empty()) return join({pt.modifier, pt.anatomy, alt});
      return join({pick(vocab::kModifier, rng), base});
    case 5:
      if (!alt.empty()) {
        return join({pick(vocab::kModifier, rng), pt.modifier, pt.anatomy, alt});
      }
      return join({base, pick(vocab::kQualifier, rng)});
    default:
      return join({pick(vocab::kModifier, rng), pick(vocab::kModifier, rng), base});
  }
}

}  // namespace

Ontology generate_synthetic_ontology(std::size_t num_llt, std::size_t num_pt,
                                     std::uint64_t seed, std::string version) {
  require(num_pt >= 1, "generate_synthetic_ontology: num_pt must be >= 1");
  require(num_pt <= num_llt,
          "generate_synthetic_ontology: num_pt must not exceed num_llt");
  Rng rng(derive_seed(seed, "synthetic-ontology"));
  const std::vector<PtSeed> pts = draw_pt_seeds(num_pt, rng);

  const std::size_t llt_width = std::max<std::size_t>(6, std::to_string(num_llt).size());
  const std::size_t pt_width = std::max<std::size_t>(6, std::to_string(num_pt).size());

  // llt name, owning pt index
  std::vector<std::pair<std::string, std::size_t>> llts;
  llts.reserve(num_llt);
  std::unordered_set<std::string> used;
  for (std::size_t p = 0; p < pts.size(); ++p) {
    llts.emplace_back(pts[p].name(), p);
    used.insert(pts[p].name());
  }
  while (llts.size() < num_llt) {
    const std::size_t p = rng.uniform_index(pts.size());
    std::string name;
    for (int attempt = 0; attempt < 16; ++attempt) {
      std::string candidate = variant_name(pts[p], rng);
      if (!used.contains(candidate)) {
        name = std::move(candidate);
        break;
      }
    }
    if (name.empty()) {
      name = pts[p].name() + " variant " + std::to_string(llts.size());
      if (used.contains(name)) continue;
    }
    used.insert(name);
    llts.emplace_back(std::move(name), p);
  }

  std::vector<LltEntry> entries;
  entries.reserve(llts.size());
  for (std::size_t i = 0; i < llts.size(); ++i) {
    const auto& [name, p] = llts[i];
    entries.push_back(LltEntry{padded_code("llt", i + 1, llt_width), name,
                               padded_code("pt", p + 1, pt_width),
                               pts[p].name()});
  }
  return Ontology(std::move(version), std::move(entries));
}

}  // namespace xtars
