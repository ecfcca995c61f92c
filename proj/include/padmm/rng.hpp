// Copyright 2026 The padmm Authors
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

#ifndef PADMM_RNG_HPP_
#define PADMM_RNG_HPP_

#include <cstdint>
#include <random>

namespace padmm {

// Named random streams derived from one master seed.  Every consumer of
// randomness owns a disjoint substream keyed by (stream, a, b, c), so
// concurrent execution produces the same draws as sequential execution.
enum class Stream : std::uint64_t {
  kNoise = 1,      // Gaussian perturbation, keyed by (node, k, r+1)
  kMinibatch = 2,  // with-replacement batch sampling, keyed by (node, k, r+1)
  kShuffle = 3,    // sample shuffling before partitioning
  kSynthetic = 4,  // synthetic feature generation
  kSeparator = 5,  // synthetic ground-truth separator
  kLabelNoise = 6, // synthetic label flips
  kSplit = 7,      // train/test split
};

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

// Seed for the substream (stream, a, b, c) of a master seed.  The chained
// splitmix64 passes keep distinct keys from colliding under simple
// arithmetic relations between the components.
inline std::uint64_t substream_seed(std::uint64_t master, Stream stream,
                                    std::uint64_t a = 0, std::uint64_t b = 0,
                                    std::uint64_t c = 0) {
  std::uint64_t h = splitmix64(master);
  h = splitmix64(h ^ static_cast<std::uint64_t>(stream));
  h = splitmix64(h ^ a);
  h = splitmix64(h ^ b);
  h = splitmix64(h ^ c);
  return h;
}

inline std::mt19937_64 substream(std::uint64_t master, Stream stream,
                                 std::uint64_t a = 0, std::uint64_t b = 0,
                                 std::uint64_t c = 0) {
  return std::mt19937_64(substream_seed(master, stream, a, b, c));
}

}  // namespace padmm

#endif  // PADMM_RNG_HPP_
