// lasr/objectives/lasr.h

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

#ifndef LASR_OBJECTIVES_LASR_H_
#define LASR_OBJECTIVES_LASR_H_

#include <cstddef>

#include "lasr/diffkit/tape.h"

namespace lasr::objectives {

/// Scalar summary of one training step.
struct LossBundle {
  double ssl_loss = 0.0;
  double supervised_loss = 0.0;
  double total = 0.0;
  double lambda = 0.0;
  std::size_t anchors_used = 0;
  std::size_t anchors_skipped = 0;
  std::size_t positions_used = 0;
  std::size_t positions_skipped = 0;
};

/// total = ssl + lambda * supervised. lambda < 0 is a DomainError.
LossBundle LasrTotal(double ssl, double supervised, double lambda);
diffkit::Var LasrTotal(diffkit::Var ssl, diffkit::Var supervised, double lambda);

}  // namespace lasr::objectives

#endif  // LASR_OBJECTIVES_LASR_H_
