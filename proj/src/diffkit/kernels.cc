// diffkit/kernels.cc

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

#include "kernels.h"

#include <algorithm>

namespace lasr::diffkit::kernels {

namespace {

// Every output element is accumulated as acc = acc + a[i][p] * b[p][j] for
// p = 0, 1, ..., k-1, starting from its current value, whatever tile it falls
// in. That fixed order is what makes a row's result independent of the other
// rows in the batch.
using V8 = double __attribute__((vector_size(64)));

inline V8 LoadV8(const double* p) {
  V8 v;
  __builtin_memcpy(&v, p, sizeof(v));
  return v;
}

inline void StoreV8(double* p, V8 v) { __builtin_memcpy(p, &v, sizeof(v)); }

// R rows by 16 columns held in registers across the whole k loop.
template <std::size_t R>
inline void Tile16(const double* a, const double* b, double* c, std::size_t k, std::size_t n) {
  V8 acc[R][2];
  for (std::size_t r = 0; r < R; ++r) {
    acc[r][0] = LoadV8(c + r * n);
    acc[r][1] = LoadV8(c + r * n + 8);
  }
  for (std::size_t p = 0; p < k; ++p) {
    const V8 b0 = LoadV8(b + p * n), b1 = LoadV8(b + p * n + 8);
    for (std::size_t r = 0; r < R; ++r) {
      const double s = a[r * k + p];
      acc[r][0] += s * b0;
      acc[r][1] += s * b1;
    }
  }
  for (std::size_t r = 0; r < R; ++r) {
    StoreV8(c + r * n, acc[r][0]);
    StoreV8(c + r * n + 8, acc[r][1]);
  }
}

// Columns [j0, n) of R rows, one element at a time.
template <std::size_t R>
inline void TailColumns(const double* a, const double* b, double* c, std::size_t k,
                        std::size_t n, std::size_t j0) {
  for (std::size_t r = 0; r < R; ++r)
    for (std::size_t j = j0; j < n; ++j) {
      double acc = c[r * n + j];
      for (std::size_t p = 0; p < k; ++p) acc += a[r * k + p] * b[p * n + j];
      c[r * n + j] = acc;
    }
}

template <std::size_t R>
inline void RowBlock(const double* a, const double* b, double* c, std::size_t k, std::size_t n) {
  std::size_t j = 0;
  for (; j + 16 <= n; j += 16) Tile16<R>(a, b + j, c + j, k, n);
  if (j < n) TailColumns<R>(a, b, c, k, n, j);
}

}  // namespace

void GemmAccumulate(const double* a, const double* b, double* c, std::size_t m,
                    std::size_t k, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= m; i += 4) RowBlock<4>(a + i * k, b, c + i * n, k, n);
  for (; i < m; ++i) RowBlock<1>(a + i * k, b, c + i * n, k, n);
}

void Gemm(const double* a, const double* b, double* c, std::size_t m, std::size_t k,
          std::size_t n) {
  std::fill(c, c + m * n, 0.0);
  GemmAccumulate(a, b, c, m, k, n);
}

void Transpose(const double* in, double* out, std::size_t r, std::size_t c) {
  constexpr std::size_t kTile = 32;
  for (std::size_t i0 = 0; i0 < r; i0 += kTile) {
    const std::size_t i1 = std::min(r, i0 + kTile);
    for (std::size_t j0 = 0; j0 < c; j0 += kTile) {
      const std::size_t j1 = std::min(c, j0 + kTile);
      for (std::size_t i = i0; i < i1; ++i)
        for (std::size_t j = j0; j < j1; ++j) out[j * r + i] = in[i * c + j];
    }
  }
}

}  // namespace lasr::diffkit::kernels
