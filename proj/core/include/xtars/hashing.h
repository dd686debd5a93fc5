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

#ifndef XTARS_HASHING_H_
#define XTARS_HASHING_H_

#include <cstdint>
#include <string>
#include <string_view>

namespace xtars {

// 64-bit FNV-1a. Used for feature hashing and artifact checksums; stable
// across platforms and runs.
std::uint64_t fnv1a64(std::string_view bytes,
                      std::uint64_t basis = 0xcbf29ce484222325ULL);

// SplitMix64 finalizer.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t seeded_hash(std::string_view bytes, std::uint64_t seed) {
  return mix64(fnv1a64(bytes) ^ mix64(seed));
}

// Combines a parent seed with a stream label into an independent child seed.
inline std::uint64_t derive_seed(std::uint64_t seed, std::string_view stream) {
  return seeded_hash(stream, seed);
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  return mix64(mix64(seed) ^ (stream * 0xd6e8feb86659fd93ULL));
}

std::string hex64(std::uint64_t value);

}  // namespace xtars

#endif  // XTARS_HASHING_H_
