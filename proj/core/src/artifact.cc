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

#include "xtars/artifact.h"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

#include "xtars/error.h"
#include "xtars/hashing.h"

namespace xtars {
namespace {

static_assert(std::endian::native == std::endian::little,
              "artifact serialization assumes a little-endian host");

void write_u64(std::ostream& out, std::uint64_t v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(v));
}

std::uint64_t read_u64(std::istream& in) {
  std::uint64_t v = 0;
  in.read(reinterpret_cast<char*>(&v), sizeof(v));
  return v;
}

}  // namespace

void write_matrix(const std::string& path, std::uint64_t rows, std::uint64_t cols,
                  std::span<const float> row_major) {
  require(row_major.size() == rows * cols, "write_matrix: shape mismatch");
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::kIo, "cannot write '" + path + "'");
  write_u64(out, rows);
  write_u64(out, cols);
  out.write(reinterpret_cast<const char*>(row_major.data()),
            static_cast<std::streamsize>(row_major.size_bytes()));
  if (!out) fail(ErrorCode::kIo, "short write to '" + path + "'");
}

Matrix read_matrix(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kIo, "cannot open '" + path + "'");
  Matrix m;
  m.rows = read_u64(in);
  m.cols = read_u64(in);
  if (!in) fail(ErrorCode::kParse, "'" + path + "': truncated header");
  if (m.cols != 0 && m.rows > (UINT64_MAX / sizeof(float)) / m.cols) {
    fail(ErrorCode::kParse, "'" + path + "': implausible shape");
  }
  in.seekg(0, std::ios::end);
  const auto size = static_cast<std::uint64_t>(in.tellg());
  if (size != 16 + m.rows * m.cols * sizeof(float)) {
    fail(ErrorCode::kParse, "'" + path + "': size does not match its header");
  }
  in.seekg(16);
  m.values.resize(m.rows * m.cols);
  in.read(reinterpret_cast<char*>(m.values.data()),
          static_cast<std::streamsize>(m.values.size() * sizeof(float)));
  if (!in) fail(ErrorCode::kIo, "short read from '" + path + "'");
  return m;
}

std::string file_checksum(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kIo, "cannot open '" + path + "'");
  std::uint64_t h = fnv1a64("");
  std::vector<char> buf(1 << 20);
  while (in) {
    in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
    h = fnv1a64(std::string_view(buf.data(), static_cast<std::size_t>(in.gcount())), h);
  }
  return hex64(h);
}

void verify_checksum(const std::string& path, const std::string& expected) {
  const std::string actual = file_checksum(path);
  if (actual != expected) {
    fail(ErrorCode::kIntegrity, "checksum mismatch for '" + path + "': manifest says " +
                                    expected + ", file has " + actual);
  }
}

nlohmann::ordered_json read_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kIo, "cannot open '" + path + "'");
  try {
    return nlohmann::ordered_json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::kParse, "'" + path + "': " + e.what());
  }
}

void write_json_file(const std::string& path, const nlohmann::ordered_json& value) {
  write_text_file(path, value.dump(2) + "\n");
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kIo, "cannot open '" + path + "'");
  return std::string(std::istreambuf_iterator<char>(in), {});
}

void write_text_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::kIo, "cannot write '" + path + "'");
  out << contents;
  if (!out) fail(ErrorCode::kIo, "short write to '" + path + "'");
}

}  // namespace xtars
