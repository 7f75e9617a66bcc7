// langsim/language.cc

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

#include "lasr/langsim/language.h"

#include <cmath>

#include "lasr/base/error.h"

namespace lasr::langsim {

LanguageSpec MakeLanguageSpec(int language_id, std::uint64_t seed, const LanguageConfig& config) {
  if (config.num_states < 2) Fail<ConfigError>("num_states must be >= 2, got ", config.num_states);
  if (config.feature_dim < 1)
    Fail<ConfigError>("feature_dim must be >= 1, got ", config.feature_dim);
  if (!(config.emission_std > 0.0))
    Fail<ConfigError>("emission_std must be positive, got ", config.emission_std);
  if (language_id < 0) Fail<ConfigError>("language_id must be non-negative");

  const auto s = static_cast<std::size_t>(config.num_states);
  const auto f = static_cast<std::size_t>(config.feature_dim);
  Rng rng = Rng::Derive(seed, {StreamTag("language"), static_cast<std::uint64_t>(language_id)});

  LanguageSpec spec;
  spec.language_id = language_id;
  spec.num_states = config.num_states;
  spec.emission_std = config.emission_std;
  spec.transition = Tensor::Zeros(s, s);
  for (std::size_t i = 0; i < s; ++i) {
    double total = 0.0;
    for (std::size_t j = 0; j < s; ++j) {
      // 1 - U lies in (0, 1], so every draw is strictly positive.
      const double w = -std::log(1.0 - rng.Uniform()) + 1e-12;
      spec.transition(i, j) = w;
      total += w;
    }
    for (std::size_t j = 0; j < s; ++j) spec.transition(i, j) /= total;
  }
  spec.emission_means = Tensor::Zeros(s, f);
  for (std::size_t i = 0; i < spec.emission_means.size(); ++i)
    spec.emission_means[i] = config.mean_scale * rng.Normal();
  return spec;
}

void ValidateLanguageSpec(const LanguageSpec& spec) {
  const auto s = static_cast<std::size_t>(spec.num_states);
  if (s < 1 || spec.transition.rows() != s || spec.transition.cols() != s ||
      spec.emission_means.rows() != s)
    Fail<DomainError>("language ", spec.language_id, ": inconsistent state count");
  if (spec.emission_std < 0.0) Fail<DomainError>("language ", spec.language_id, ": negative std");
  for (std::size_t i = 0; i < s; ++i) {
    double total = 0.0;
    for (std::size_t j = 0; j < s; ++j) {
      if (spec.transition(i, j) < 0.0)
        Fail<DomainError>("language ", spec.language_id, ": negative transition probability");
      total += spec.transition(i, j);
    }
    if (std::abs(total - 1.0) > 1e-9)
      Fail<DomainError>("language ", spec.language_id, ": transition row ", i, " sums to ", total);
  }
}

Utterance SampleUtterance(const LanguageSpec& spec, std::size_t num_frames, Rng& rng) {
  if (num_frames < 1) Fail<DomainError>("utterance needs at least one frame");
  ValidateLanguageSpec(spec);
  const auto s = static_cast<std::size_t>(spec.num_states);
  const std::size_t f = spec.emission_means.cols();

  Utterance utt;
  utt.label = spec.language_id;
  utt.frames = Tensor::Zeros(num_frames, f);
  std::size_t state = rng.Index(s);
  for (std::size_t t = 0; t < num_frames; ++t) {
    if (t > 0) {
      const double u = rng.Uniform();
      double acc = 0.0;
      std::size_t next = s - 1;
      for (std::size_t j = 0; j < s; ++j) {
        acc += spec.transition(state, j);
        if (u < acc) {
          next = j;
          break;
        }
      }
      state = next;
    }
    for (std::size_t j = 0; j < f; ++j)
      utt.frames(t, j) = spec.emission_means(state, j) + spec.emission_std * rng.Normal();
  }
  return utt;
}

}  // namespace lasr::langsim
