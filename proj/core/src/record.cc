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

#include "xtars/record.h"

#include <fstream>

#include "json.hpp"
#include "xtars/error.h"

namespace xtars {

std::string_view source_name(Source source) {
  switch (source) {
    case Source::kCoded: return "coded";
    case Source::kAutocoded: return "autocoded";
    case Source::kSynonym: return "synonym";
    case Source::kOntology: return "ontology";
    case Source::kAugmented: return "augmented";
  }
  return "unknown";
}

Source parse_source(std::string_view name) {
  if (name == "coded") return Source::kCoded;
  if (name == "autocoded") return Source::kAutocoded;
  if (name == "synonym") return Source::kSynonym;
  if (name == "ontology") return Source::kOntology;
  if (name == "augmented") return Source::kAugmented;
  fail(ErrorCode::kParse, "unknown record source '" + std::string(name) + "'");
}

std::vector<CodedRecord> read_records_jsonl(std::istream& in,
                                            std::string_view id_prefix) {
  std::vector<CodedRecord> records;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = "records line " + std::to_string(line_no);
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      fail(ErrorCode::kParse, where + ": " + e.what());
    }
    try {
      CodedRecord r;
      r.rt = j.at("rt").get<std::string>();
      r.llt_code = j.at("llt_code").get<std::string>();
      r.source = parse_source(j.at("source").get<std::string>());
      r.timestamp = parse_iso8601(j.at("timestamp").get<std::string>());
      if (j.contains("origin_id") && !j["origin_id"].is_null()) {
        r.origin_id = j["origin_id"].get<std::string>();
      }
      r.id = j.contains("id") ? j["id"].get<std::string>()
                              : std::string(id_prefix) + std::to_string(line_no);
      if ((r.source == Source::kAugmented) != r.origin_id.has_value()) {
        fail(ErrorCode::kParse,
             where + ": origin_id must be set exactly for augmented records");
      }
      records.push_back(std::move(r));
    } catch (const nlohmann::json::exception& e) {
      fail(ErrorCode::kParse, where + ": " + e.what());
    }
  }
  return records;
}

std::vector<CodedRecord> read_records_jsonl_file(const std::string& path,
                                                 std::string_view id_prefix) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::kIo, "cannot open records file '" + path + "'");
  return read_records_jsonl(in, id_prefix);
}

void write_records_jsonl(std::ostream& out,
                         const std::vector<CodedRecord>& records) {
  for (const CodedRecord& r : records) {
    nlohmann::ordered_json j;
    j["id"] = r.id;
    j["rt"] = r.rt;
    j["llt_code"] = r.llt_code;
    j["source"] = source_name(r.source);
    j["timestamp"] = format_iso8601(r.timestamp);
    if (r.origin_id) j["origin_id"] = *r.origin_id;
    out << j.dump() << '\n';
  }
}

void write_records_jsonl_file(const std::string& path,
                              const std::vector<CodedRecord>& records) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::kIo, "cannot write records file '" + path + "'");
  write_records_jsonl(out, records);
}

}  // namespace xtars
