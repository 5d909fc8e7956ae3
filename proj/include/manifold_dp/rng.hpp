// Copyright 2026 The manifold-dp Authors
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

#pragma once

#include <cstdint>
#include <random>

namespace manifold_dp {

// SplitMix64 finalizer. Turns a loosely structured key into a well-mixed
// 64-bit value.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Derives an independent engine for a given (master seed, stream index) pair:
// stream id = seed XOR index, hashed through splitmix64. Replicate streams are
// therefore stable regardless of execution order.
inline std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t stream_index) {
  return std::mt19937_64(splitmix64(seed ^ stream_index));
}

}  // namespace manifold_dp
