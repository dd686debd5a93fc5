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

#ifndef XTARS_ARTIFACT_H_
#define XTARS_ARTIFACT_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

namespace xtars {

// Row-major float32 matrix preceded by rows and cols as little-endian u64.
void write_matrix(const std::string& path, std::uint64_t rows, std::uint64_t cols,
                  std::span<const float> row_major);

struct Matrix {
  std::uint64_t rows = 0;
  std::uint64_t cols = 0;
  std::vector<float> values;  // row-major
};
Matrix read_matrix(const std::string& path);

// FNV-1a 64 of a file's bytes, as 16 hex digits.
std::string file_checksum(const std::string& path);

// Throws Error(kIntegrity) when the file's checksum differs from `expected`.
void verify_checksum(const std::string& path, const std::string& expected);

nlohmann::ordered_json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const nlohmann::ordered_json& value);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& contents);

}  // namespace xtars

#endif  // XTARS_ARTIFACT_H_
