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

#ifndef XTARS_FEATURIZER_H_
#define XTARS_FEATURIZER_H_

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace xtars {

struct FeaturizerConfig {
  std::vector<int> ngram_sizes = {2, 3, 4};
  bool word_unigrams = true;
  std::uint32_t dim = 1u << 15;
  std::uint64_t hash_seed = 0;

  friend bool operator==(const FeaturizerConfig&, const FeaturizerConfig&) = default;
};

struct SparseEntry {
  std::uint32_t index;
  float value;
};

// Sparse vector with strictly increasing indices, all < dim.
class FeatureVector {
 public:
  FeatureVector() = default;
  FeatureVector(std::vector<SparseEntry> entries, std::uint32_t dim);

  std::span<const SparseEntry> entries() const { return entries_; }
  std::uint32_t dim() const { return dim_; }
  std::size_t nnz() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  double dot(const FeatureVector& other) const;
  double norm() const;

 private:
  std::vector<SparseEntry> entries_;
  std::uint32_t dim_ = 0;
};

// Accumulates signed hashed counts; `finish` merges duplicates and
// optionally L2-normalizes.
class FeatureBuilder {
 public:
  explicit FeatureBuilder(std::uint32_t dim) : dim_(dim) {}

  void add_hashed(std::uint64_t hash, float count = 1.0f);
  void add(std::uint32_t index, float value);
  FeatureVector finish(bool l2_normalize);

 private:
  std::uint32_t dim_;
  std::vector<SparseEntry> pending_;
};

// Hashed character n-grams over " <lowercased text> " plus hashed word
// unigrams, as counts, then L2-normalized. Sign and bucket come from one
// 64-bit hash per feature. Throws Error(kInvalidArgument) on text that is
// empty after trimming.
FeatureVector featurize(std::string_view text, const FeaturizerConfig& config);

// The set of distinct character n-gram hashes of `text` (same padding as
// featurize). Used for pair features in the matcher.
std::vector<std::uint64_t> ngram_hashes(std::string_view text,
                                        const FeaturizerConfig& config);

}  // namespace xtars

#endif  // XTARS_FEATURIZER_H_
