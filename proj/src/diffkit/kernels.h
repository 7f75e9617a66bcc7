// diffkit/kernels.h

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

#ifndef LASR_DIFFKIT_KERNELS_H_
#define LASR_DIFFKIT_KERNELS_H_

#include <cstddef>

namespace lasr::diffkit::kernels {

/// c[m x n] = a[m x k] * b[k x n], all row-major.
///
/// Every output row is accumulated over k in index order with the same
/// instruction sequence, whatever the number of rows in the call, so a row's
/// result does not depend on which other rows are batched with it.
void Gemm(const double* a, const double* b, double* c, std::size_t m, std::size_t k,
          std::size_t n);

/// c[m x n] += a[m x k] * b[k x n].
void GemmAccumulate(const double* a, const double* b, double* c, std::size_t m,
                    std::size_t k, std::size_t n);

/// out[c x r] = in[r x c]^T.
void Transpose(const double* in, double* out, std::size_t r, std::size_t c);

}  // namespace lasr::diffkit::kernels

#endif  // LASR_DIFFKIT_KERNELS_H_
