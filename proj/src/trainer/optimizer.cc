// trainer/optimizer.cc

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

#include "lasr/trainer/optimizer.h"

#include <algorithm>
#include <cmath>

#include "lasr/base/error.h"

namespace lasr::trainer {

double LrSchedule(std::uint64_t step, std::uint64_t warmup_steps, double peak_lr) {
  if (step < 1) Fail<DomainError>("learning-rate schedule: step must be >= 1");
  if (warmup_steps < 1) Fail<DomainError>("learning-rate schedule: warmup must be >= 1");
  const double s = static_cast<double>(step), w = static_cast<double>(warmup_steps);
  return peak_lr * std::min(s / w, std::sqrt(w / s));
}

encoder::OptimizerBlocks AdamState::ToBlocks() const {
  return encoder::OptimizerBlocks{step, first_moment, second_moment};
}

AdamState AdamState::FromBlocks(const encoder::OptimizerBlocks& blocks) {
  AdamState s;
  s.step = blocks.step;
  s.first_moment = blocks.first_moment;
  s.second_moment = blocks.second_moment;
  return s;
}

AdamState MakeAdamState(const encoder::EncoderParams& params) {
  AdamState s;
  for (std::size_t i = 0; i < params.num_blocks(); ++i) {
    s.first_moment.push_back(Tensor::ZerosLike(params.block(i)));
    s.second_moment.push_back(Tensor::ZerosLike(params.block(i)));
  }
  return s;
}

void AdamStep(encoder::EncoderParams& params, const std::vector<Tensor>& grads, AdamState& state,
              double lr, const std::vector<bool>& update) {
  const std::size_t n = params.num_blocks();
  if (grads.size() != n || state.first_moment.size() != n || state.second_moment.size() != n)
    Fail<ShapeError>("Adam: ", n, " parameter blocks but ", grads.size(), " gradients and ",
                     state.first_moment.size(), " moment blocks");
  if (!update.empty() && update.size() != n) Fail<ShapeError>("Adam: update mask has wrong length");
  if (!(lr > 0.0)) Fail<DomainError>("Adam: learning rate must be > 0, got ", lr);
  const std::uint64_t step = state.step + 1;
  for (std::size_t i = 0; i < n; ++i) {
    if (grads[i].shape() != params.block(i).shape() ||
        state.first_moment[i].shape() != params.block(i).shape() ||
        state.second_moment[i].shape() != params.block(i).shape())
      Fail<ShapeError>("Adam: shape mismatch for block '", params.name(i), "'");
    if (!update.empty() && !update[i]) continue;
    if (!grads[i].AllFinite())
      Fail<NumericError>("Adam: non-finite gradient in block '", params.name(i), "' at step ", step);
  }
  const double c1 = 1.0 - std::pow(state.beta1, static_cast<double>(step));
  const double c2 = 1.0 - std::pow(state.beta2, static_cast<double>(step));
  for (std::size_t i = 0; i < n; ++i) {
    if (!update.empty() && !update[i]) continue;
    double* p = params.block(i).ptr();
    double* m = state.first_moment[i].ptr();
    double* v = state.second_moment[i].ptr();
    const double* g = grads[i].ptr();
    for (std::size_t k = 0; k < grads[i].size(); ++k) {
      m[k] = state.beta1 * m[k] + (1.0 - state.beta1) * g[k];
      v[k] = state.beta2 * v[k] + (1.0 - state.beta2) * g[k] * g[k];
      p[k] -= lr * (m[k] / c1) / (std::sqrt(v[k] / c2) + state.epsilon);
    }
  }
  state.step = step;
}

double ClipGlobalNorm(std::vector<Tensor>& grads, double max_norm) {
  double sq = 0.0;
  for (const Tensor& g : grads)
    for (double x : g.data()) sq += x * x;
  const double norm = std::sqrt(sq);
  if (norm > max_norm && std::isfinite(norm)) {
    const double scale = max_norm / norm;
    for (Tensor& g : grads)
      for (double& x : g.data()) x *= scale;
  }
  return norm;
}

}  // namespace lasr::trainer
