// lasr/objectives/ssl.h

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

#ifndef LASR_OBJECTIVES_SSL_H_
#define LASR_OBJECTIVES_SSL_H_

#include <string_view>
#include <vector>

#include "lasr/base/rng.h"
#include "lasr/diffkit/tape.h"

namespace lasr::objectives {

using diffkit::Var;

enum class SslChoice { kNone, kContrastive, kMlm };

std::string_view SslChoiceName(SslChoice c);
SslChoice ParseSslChoice(std::string_view name);

struct SslConfig {
  double mask_rate = 0.15;
  int span_length = 3;
  int num_distractors = 5;
  double temperature = 0.1;
};

/// Mean cross-entropy of `logits` (one row per masked position) against the
/// quantizer codes. No rows is a DomainError.
Var MlmLoss(Var logits, const std::vector<std::size_t>& targets);

struct ContrastiveResult {
  Var loss;
  std::size_t positions_used = 0;
  /// Positions whose utterance has no other masked position to contrast with.
  std::size_t positions_skipped = 0;
};

/// InfoNCE over cosine similarities. Row r of `context` is the prediction for
/// the latent in row r of `latents`; rows [groups[u], groups[u+1]) belong to
/// utterance u. Each position draws min(K, n_u - 1) distractors uniformly
/// without replacement from the other positions of its utterance.
ContrastiveResult ContrastiveLoss(Var context, Var latents, const std::vector<std::size_t>& groups,
                                  std::size_t num_distractors, double temperature, Rng& rng);

}  // namespace lasr::objectives

#endif  // LASR_OBJECTIVES_SSL_H_
