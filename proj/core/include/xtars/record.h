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

#ifndef XTARS_RECORD_H_
#define XTARS_RECORD_H_

#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "xtars/timestamp.h"

namespace xtars {

enum class Source { kCoded, kAutocoded, kSynonym, kOntology, kAugmented };

std::string_view source_name(Source source);
Source parse_source(std::string_view name);

// One (reported term, LLT) training or evaluation pair.
struct CodedRecord {
  std::string id;
  std::string rt;
  std::string llt_code;
  Source source = Source::kCoded;
  // Set iff source == kAugmented.
  std::optional<std::string> origin_id;
  Timestamp timestamp = 0;

  friend bool operator==(const CodedRecord&, const CodedRecord&) = default;
};

// JSONL with keys rt, llt_code, source, timestamp (ISO-8601), optional
// origin_id and id. Records without an id get "<prefix><line number>".
std::vector<CodedRecord> read_records_jsonl(std::istream& in,
                                            std::string_view id_prefix = "r");
std::vector<CodedRecord> read_records_jsonl_file(const std::string& path,
                                                 std::string_view id_prefix = "r");
void write_records_jsonl(std::ostream& out,
                         const std::vector<CodedRecord>& records);
void write_records_jsonl_file(const std::string& path,
                              const std::vector<CodedRecord>& records);

}  // namespace xtars

#endif  // XTARS_RECORD_H_
