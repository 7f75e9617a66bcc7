// lasr/encoder/quantizer.h

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

#ifndef LASR_ENCODER_QUANTIZER_H_
#define LASR_ENCODER_QUANTIZER_H_

#include <cstdint>
#include <vector>

#include "lasr/diffkit/tensor.h"

namespace lasr::encoder {

using diffkit::Tensor;

/// Frozen random projection plus frozen unit-norm codebook. Both are
/// regenerated from the seed, so the quantizer is never stored or trained.
struct RandomQuantizer {
  Tensor projection;  // code_dim x F
  Tensor codebook;    // V x code_dim, rows L2-normalized
  std::uint64_t seed = 0;

  std::size_t codebook_size() const { return codebook.rows(); }
};

RandomQuantizer MakeRandomQuantizer(int feature_dim, int code_dim, int codebook_size,
                                    std::uint64_t seed);

/// Nearest codebook row to normalize(projection * frame_t), ties to the lowest
/// index. A frame whose projection is exactly zero cannot be normalized and is
/// matched by unnormalized distance instead.
std::vector<std::size_t> QuantizeTargets(const RandomQuantizer& q, const Tensor& frames);

}  // namespace lasr::encoder

#endif  // LASR_ENCODER_QUANTIZER_H_
