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

#include "xtars/featurizer.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "xtars/error.h"
#include "xtars/hashing.h"
#include "xtars/text.h"

namespace xtars {

FeatureVector::FeatureVector(std::vector<SparseEntry> entries, std::uint32_t dim)
    : entries_(std::move(entries)), dim_(dim) {
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    require(entries_[i].index < dim_, "FeatureVector: index out of range");
    require(i == 0 || entries_[i - 1].index < entries_[i].index,
            "FeatureVector: indices must be strictly increasing");
    require(std::isfinite(entries_[i].value), "FeatureVector: non-finite value");
  }
}

double FeatureVector::dot(const FeatureVector& other) const {
  double sum = 0;
  auto a = entries_.begin(), ae = entries_.end();
  auto b = other.entries_.begin(), be = other.entries_.end();
  while (a != ae && b != be) {
    if (a->index < b->index) {
      ++a;
    } else if (b->index < a->index) {
      ++b;
    } else {
      sum += static_cast<double>(a->value) * b->value;
      ++a;
      ++b;
    }
  }
  return sum;
}

double FeatureVector::norm() const {
  double sum = 0;
  for (const SparseEntry& e : entries_) sum += static_cast<double>(e.value) * e.value;
  return std::sqrt(sum);
}

void FeatureBuilder::add_hashed(std::uint64_t hash, float count) {
  const auto index = static_cast<std::uint32_t>(hash % dim_);
  const float sign = (hash >> 63) ? -1.0f : 1.0f;
  pending_.push_back({index, sign * count});
}

void FeatureBuilder::add(std::uint32_t index, float value) {
  pending_.push_back({index, value});
}

FeatureVector FeatureBuilder::finish(bool l2_normalize) {
  std::sort(pending_.begin(), pending_.end(),
            [](const SparseEntry& a, const SparseEntry& b) { return a.index < b.index; });
  std::vector<SparseEntry> merged;
  merged.reserve(pending_.size());
  for (const SparseEntry& e : pending_) {
    if (!merged.empty() && merged.back().index == e.index) {
      merged.back().value += e.value;
    } else {
      merged.push_back(e);
    }
  }
  pending_.clear();
  std::erase_if(merged, [](const SparseEntry& e) { return e.value == 0.0f; });
  if (l2_normalize) {
    double sum = 0;
    for (const SparseEntry& e : merged) sum += static_cast<double>(e.value) * e.value;
    if (sum > 0) {
      const double inv = 1.0 / std::sqrt(sum);
      for (SparseEntry& e : merged) e.value = static_cast<float>(e.value * inv);
    }
  }
  return FeatureVector(std::move(merged), dim_);
}

namespace {

// Stream seeds keep n-grams of different sizes and words apart.
std::uint64_t stream_seed(const FeaturizerConfig& config, std::uint64_t stream) {
  return derive_seed(config.hash_seed, stream);
}

std::string padded(std::string_view text) {
  std::string p = " ";
  p += to_lower(trim(text));
  p += ' ';
  return p;
}

}  // namespace

FeatureVector featurize(std::string_view text, const FeaturizerConfig& config) {
  require(config.dim > 0, "featurize: dim must be positive");
  if (trim(text).empty()) {
    fail(ErrorCode::kInvalidArgument, "featurize: text is empty after trimming");
  }
  const std::string p = padded(text);
  FeatureBuilder builder(config.dim);
  for (int n : config.ngram_sizes) {
    if (n <= 0 || static_cast<std::size_t>(n) > p.size()) continue;
    const std::uint64_t seed = stream_seed(config, static_cast<std::uint64_t>(n));
    for (std::size_t i = 0; i + static_cast<std::size_t>(n) <= p.size(); ++i) {
      builder.add_hashed(seeded_hash(std::string_view(p).substr(i, static_cast<std::size_t>(n)), seed));
    }
  }
  if (config.word_unigrams) {
    const std::uint64_t seed = stream_seed(config, 0);
    for (std::string_view w : split_words(p)) builder.add_hashed(seeded_hash(w, seed));
  }
  return builder.finish(/*l2_normalize=*/true);
}

std::vector<std::uint64_t> ngram_hashes(std::string_view text,
                                        const FeaturizerConfig& config) {
  const std::string p = padded(text);
  std::vector<std::uint64_t> out;
  for (int n : config.ngram_sizes) {
    if (n <= 0 || static_cast<std::size_t>(n) > p.size()) continue;
    const std::uint64_t seed = stream_seed(config, static_cast<std::uint64_t>(n));
    for (std::size_t i = 0; i + static_cast<std::size_t>(n) <= p.size(); ++i) {
      out.push_back(seeded_hash(std::string_view(p).substr(i, static_cast<std::size_t>(n)), seed));
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace xtars
