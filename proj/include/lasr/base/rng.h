// lasr/base/rng.h

// Copyright 2026  The LASR Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//       http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef LASR_BASE_RNG_H_
#define LASR_BASE_RNG_H_

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <string_view>
#include <vector>

namespace lasr {

/// FNV-1a over a tag string; used to name RNG streams.
constexpr std::uint64_t StreamTag(std::string_view tag) {
  std::uint64_t h = 1469598103934665603ULL;
  for (char c : tag) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ULL;
  }
  return h;
}

/// Folds a list of integers into a base seed with splitmix64 finalization.
/// Streams derived from distinct paths are statistically independent, and the
/// derivation never depends on the order in which streams are requested.
std::uint64_t DeriveSeed(std::uint64_t base, std::initializer_list<std::uint64_t> path);

/// Seeded random stream. Every consumer receives its own instance; streams are
/// never shared between threads or between logically separate draws.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  static Rng Derive(std::uint64_t base, std::initializer_list<std::uint64_t> path) {
    return Rng(DeriveSeed(base, path));
  }

  /// Uniform in [0, 1).
  double Uniform();
  double Normal();
  /// Uniform integer in [0, n). n must be positive.
  std::size_t Index(std::size_t n);
  /// Uniform in [lo, hi], inclusive.
  std::int64_t Integer(std::int64_t lo, std::int64_t hi);

  /// k distinct values from [0, n) in draw order (partial Fisher-Yates).
  std::vector<std::size_t> SampleWithoutReplacement(std::size_t n, std::size_t k);

  template <typename T>
  void Shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = Index(i);
      std::swap(v[i - 1], v[j]);
    }
  }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace lasr

#endif  // LASR_BASE_RNG_H_
