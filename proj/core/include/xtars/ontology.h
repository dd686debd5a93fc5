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

#ifndef XTARS_ONTOLOGY_H_
#define XTARS_ONTOLOGY_H_

#include <cstddef>
#include <cstdint>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "xtars/record.h"

namespace xtars {

// A lowest-level term and the preferred term that owns it.
struct LltEntry {
  std::string llt_code;
  std::string llt_name;
  std::string pt_code;
  std::string pt_name;

  friend bool operator==(const LltEntry&, const LltEntry&) = default;
};

struct PtRef {
  std::string_view code;
  std::string_view name;
};

// Immutable two-level label ontology (LLT under PT). Entries keep their
// insertion order; lookups go through a code index.
class Ontology {
 public:
  Ontology() = default;

  // Validates the type invariants and lowercases names. Throws Error(kParse)
  // on duplicate llt_code, an empty name, or a pt_code carrying two names.
  Ontology(std::string version, std::vector<LltEntry> entries);

  const std::string& version() const { return version_; }
  std::span<const LltEntry> entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  std::size_t pt_count() const { return pt_names_.size(); }

  bool contains(std::string_view llt_code) const;
  // nullptr when absent.
  const LltEntry* find(std::string_view llt_code) const;
  // Throws LookupError when absent.
  const LltEntry& at(std::string_view llt_code) const;

  // The unique PT of an LLT. Throws LookupError for codes outside this
  // ontology version, which usually means a prediction made against a stale
  // label set.
  PtRef pt_of(std::string_view llt_code) const;

 private:
  std::string version_;
  std::vector<LltEntry> entries_;
  std::unordered_map<std::string, std::size_t> by_code_;
  std::unordered_map<std::string, std::string> pt_names_;
};

// CSV with header `llt_code,llt_name,pt_code,pt_name`.
Ontology read_ontology_csv(std::istream& in, std::string version);
Ontology load_ontology(const std::string& path, std::string version);
void write_ontology_csv(std::ostream& out, const Ontology& ontology);
void save_ontology(const std::string& path, const Ontology& ontology);

// Three records per entry: the LLT name verbatim (source kOntology) plus a
// word-split and a character-change variant (source kAugmented, origin set
// to the verbatim record). Record ids are "ont:<code>", "ont:<code>:split"
// and "ont:<code>:char".
std::vector<CodedRecord> ontology_to_records(const Ontology& ontology,
                                             std::uint64_t seed);

// Desk-scale stand-in for a licensed terminology. PT names are
// "<anatomy> <condition>" pairs; each PT owns an LLT with its own name plus
// compositional variants ("acute leg pain", "pain of leg", "leg ache"), so
// sibling LLTs share tokens. Deterministic in the seed.
Ontology generate_synthetic_ontology(std::size_t num_llt, std::size_t num_pt,
                                     std::uint64_t seed,
                                     std::string version = "synthetic");

}  // namespace xtars

#endif  // XTARS_ONTOLOGY_H_
