// Copyright 2026 the rramnet authors
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

#ifndef RRAMNET_RNG_HPP
#define RRAMNET_RNG_HPP

#include <cstdint>
#include <random>
#include <vector>

namespace rramnet::rng {

// splitmix64 step; used for seed derivation only, never as the main stream.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Named substreams so that independent consumers of one user-facing seed
// never share state.
enum class Stream : std::uint64_t {
  NetworkInit = 1,
  EpochShuffle = 2,
  SweepCell = 3,
};

inline std::uint64_t derive_seed(std::uint64_t root, Stream stream,
                                 std::uint64_t index) {
  std::uint64_t s = splitmix64(root ^ splitmix64(static_cast<std::uint64_t>(stream)));
  return splitmix64(s ^ splitmix64(index));
}

// mt19937_64 with fully specified value mappings. std::uniform_*_distribution
// is implementation-defined, so uniform doubles and bounded integers are
// produced here explicitly and reproduce bit-identically everywhere.
class Engine {
public:
  explicit Engine(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next() { return gen_(); }

  // Uniform in [0, 1), 53-bit mantissa.
  double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Unbiased integer in [0, n) by rejection.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t threshold = (0 - n) % n;
    for (;;) {
      const std::uint64_t r = gen_();
      if (r >= threshold) return r % n;
    }
  }

private:
  std::mt19937_64 gen_;
};

// Fisher-Yates with the explicit bounded sampler above.
template <typename Int>
void shuffle(std::vector<Int>& v, Engine& eng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(eng.below(i));
    std::swap(v[i - 1], v[j]);
  }
}

inline std::vector<int> permutation(int n, Engine& eng) {
  std::vector<int> order(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
  shuffle(order, eng);
  return order;
}

}  // namespace rramnet::rng

#endif  // RRAMNET_RNG_HPP
