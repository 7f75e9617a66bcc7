// objectives/ssl.cc

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

#include "lasr/objectives/ssl.h"

#include "lasr/base/error.h"

namespace lasr::objectives {

using namespace diffkit;

std::string_view SslChoiceName(SslChoice c) {
  switch (c) {
    case SslChoice::kNone: return "none";
    case SslChoice::kContrastive: return "contrastive";
    case SslChoice::kMlm: return "mlm";
  }
  return "?";
}

SslChoice ParseSslChoice(std::string_view name) {
  for (auto c : {SslChoice::kNone, SslChoice::kContrastive, SslChoice::kMlm})
    if (SslChoiceName(c) == name) return c;
  Fail<ConfigError>("unknown SSL objective '", name, "' (expected contrastive, mlm or none)");
}

Var MlmLoss(Var logits, const std::vector<std::size_t>& targets) {
  if (targets.empty()) Fail<DomainError>("MLM loss: no masked positions");
  return SoftmaxCrossEntropy(logits, targets);
}

ContrastiveResult ContrastiveLoss(Var context, Var latents, const std::vector<std::size_t>& groups,
                                  std::size_t num_distractors, double temperature, Rng& rng) {
  const std::size_t m = context.value().rows();
  if (latents.value().rows() != m || latents.value().cols() != context.value().cols())
    Fail<ShapeError>("contrastive loss: context ", ShapeString(context.value().shape()),
                     " and latents ", ShapeString(latents.value().shape()), " differ");
  if (groups.size() < 2 || groups.front() != 0 || groups.back() != m)
    Fail<ShapeError>("contrastive loss: group offsets must span [0, ", m, "]");
  if (num_distractors < 1) Fail<DomainError>("contrastive loss: need at least one distractor");
  if (!(temperature > 0.0)) Fail<DomainError>("contrastive loss: temperature must be > 0");

  const std::size_t width = num_distractors + 1;
  std::vector<std::size_t> rows, cols, lengths;
  ContrastiveResult r;
  for (std::size_t g = 0; g + 1 < groups.size(); ++g) {
    const std::size_t begin = groups[g], end = groups[g + 1];
    if (end < begin) Fail<ShapeError>("contrastive loss: group offsets must be non-decreasing");
    const std::size_t n = end - begin;
    if (n == 1) {
      ++r.positions_skipped;
      continue;
    }
    const std::size_t k = std::min(num_distractors, n - 1);
    for (std::size_t t = begin; t < end; ++t) {
      // Column 0 is the true latent; the rest are distractors; unused
      // columns repeat the target and are excluded by the row length.
      std::vector<std::size_t> picks = rng.SampleWithoutReplacement(n - 1, k);
      rows.insert(rows.end(), width, t);
      cols.push_back(t);
      for (std::size_t c : picks) {
        const std::size_t other = begin + c;
        cols.push_back(other >= t ? other + 1 : other);
      }
      cols.insert(cols.end(), width - 1 - k, t);
      lengths.push_back(k + 1);
      ++r.positions_used;
    }
  }
  if (r.positions_used == 0)
    Fail<DomainError>("contrastive loss: no masked position has a distractor candidate (",
                      r.positions_skipped, " skipped)");
  Var sim = MatMul(RowNormalize(context), Transpose(RowNormalize(latents)));
  Var logits = Scale(Pick(sim, rows, cols, r.positions_used, width), 1.0 / temperature);
  r.loss = SoftmaxCrossEntropy(logits, std::vector<std::size_t>(r.positions_used, 0), lengths);
  return r;
}

}  // namespace lasr::objectives
