// lasr/trainer/optimizer.h

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

#ifndef LASR_TRAINER_OPTIMIZER_H_
#define LASR_TRAINER_OPTIMIZER_H_

#include <cstdint>
#include <vector>

#include "lasr/encoder/checkpoint.h"
#include "lasr/encoder/encoder.h"

namespace lasr::trainer {

using diffkit::Tensor;

/// Linear warmup to peak_lr at warmup_steps, then inverse square root decay.
/// Steps count from 1.
double LrSchedule(std::uint64_t step, std::uint64_t warmup_steps, double peak_lr);

struct AdamState {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  /// Number of updates applied so far.
  std::uint64_t step = 0;
  std::vector<Tensor> first_moment;
  std::vector<Tensor> second_moment;

  encoder::OptimizerBlocks ToBlocks() const;
  static AdamState FromBlocks(const encoder::OptimizerBlocks& blocks);
};

/// Zero moments shaped like `params`.
AdamState MakeAdamState(const encoder::EncoderParams& params);

/// One bias-corrected Adam update of every block with update[i] == true
/// (all blocks when `update` is empty). A non-finite gradient throws
/// NumericError naming the block and the step.
void AdamStep(encoder::EncoderParams& params, const std::vector<Tensor>& grads, AdamState& state,
              double lr, const std::vector<bool>& update = {});

/// Rescales all gradients so their joint L2 norm is at most max_norm.
/// Returns the norm before clipping.
double ClipGlobalNorm(std::vector<Tensor>& grads, double max_norm);

}  // namespace lasr::trainer

#endif  // LASR_TRAINER_OPTIMIZER_H_
