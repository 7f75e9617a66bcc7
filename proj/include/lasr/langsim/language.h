// lasr/langsim/language.h

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

#ifndef LASR_LANGSIM_LANGUAGE_H_
#define LASR_LANGSIM_LANGUAGE_H_

#include <cstdint>

#include "lasr/base/rng.h"
#include "lasr/diffkit/tensor.h"

namespace lasr::langsim {

using diffkit::Tensor;

/// Label value carried by utterances without a language label.
inline constexpr int kUnlabeled = -1;

struct LanguageConfig {
  int num_states = 5;
  int feature_dim = 20;
  double emission_std = 1.0;
  double mean_scale = 1.5;
};

/// A "language": a hidden Markov chain over `num_states` states, each
/// emitting isotropic Gaussian frames around its own mean.
struct LanguageSpec {
  int language_id = 0;
  int num_states = 0;
  Tensor transition;      // num_states x num_states, row-stochastic
  Tensor emission_means;  // num_states x feature_dim
  double emission_std = 1.0;

  int feature_dim() const { return static_cast<int>(emission_means.cols()); }
};

struct Utterance {
  Tensor frames;  // T x F
  int label = kUnlabeled;
  std::uint64_t utterance_id = 0;

  bool labeled() const { return label != kUnlabeled; }
  std::size_t num_frames() const { return frames.rows(); }
};

/// Deterministic in (language_id, seed). Transition rows are normalized
/// exponential draws; emission means are mean_scale * N(0, I).
LanguageSpec MakeLanguageSpec(int language_id, std::uint64_t seed, const LanguageConfig& config);

/// Checks row-stochasticity (to 1e-9) and shapes; throws DomainError.
void ValidateLanguageSpec(const LanguageSpec& spec);

/// Samples T frames. The chain starts from a uniform state; the utterance is
/// labelled with spec.language_id.
Utterance SampleUtterance(const LanguageSpec& spec, std::size_t num_frames, Rng& rng);

}  // namespace lasr::langsim

#endif  // LASR_LANGSIM_LANGUAGE_H_
