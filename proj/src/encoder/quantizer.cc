// encoder/quantizer.cc

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

#include "lasr/encoder/quantizer.h"

#include <cmath>
#include <limits>

#include "lasr/base/error.h"
#include "lasr/base/rng.h"

namespace lasr::encoder {

RandomQuantizer MakeRandomQuantizer(int feature_dim, int code_dim, int codebook_size,
                                    std::uint64_t seed) {
  if (feature_dim < 1 || code_dim < 1 || codebook_size < 1)
    Fail<ConfigError>("quantizer dimensions must be positive (F=", feature_dim,
                      ", code_dim=", code_dim, ", V=", codebook_size, ")");
  RandomQuantizer q;
  q.seed = seed;
  q.projection = Tensor::Zeros(static_cast<std::size_t>(code_dim), static_cast<std::size_t>(feature_dim));
  q.codebook = Tensor::Zeros(static_cast<std::size_t>(codebook_size), static_cast<std::size_t>(code_dim));
  Rng proj_rng = Rng::Derive(seed, {StreamTag("quantizer-projection")});
  for (double& x : q.projection.data()) x = proj_rng.Normal();
  Rng code_rng = Rng::Derive(seed, {StreamTag("quantizer-codebook")});
  for (std::size_t v = 0; v < q.codebook.rows(); ++v) {
    auto row = q.codebook.row(v);
    double norm = 0.0;
    while (norm == 0.0) {
      norm = 0.0;
      for (double& x : row) {
        x = code_rng.Normal();
        norm += x * x;
      }
      norm = std::sqrt(norm);
    }
    for (double& x : row) x /= norm;
  }
  return q;
}

std::vector<std::size_t> QuantizeTargets(const RandomQuantizer& q, const Tensor& frames) {
  const std::size_t f = q.projection.cols();
  const std::size_t dc = q.projection.rows();
  if (frames.cols() != f)
    Fail<ShapeError>("quantize: frames have ", frames.cols(), " features, quantizer expects ", f);
  if (!frames.AllFinite()) Fail<DomainError>("quantize: non-finite frame values");
  std::vector<std::size_t> codes(frames.rows());
  std::vector<double> p(dc);
  for (std::size_t t = 0; t < frames.rows(); ++t) {
    auto frame = frames.row(t);
    double norm = 0.0;
    for (std::size_t i = 0; i < dc; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < f; ++j) s += q.projection(i, j) * frame[j];
      p[i] = s;
      norm += s * s;
    }
    norm = std::sqrt(norm);
    if (norm > 0.0)
      for (double& x : p) x /= norm;
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_v = 0;
    for (std::size_t v = 0; v < q.codebook.rows(); ++v) {
      auto c = q.codebook.row(v);
      double d = 0.0;
      for (std::size_t i = 0; i < dc; ++i) d += (p[i] - c[i]) * (p[i] - c[i]);
      if (d < best) {
        best = d;
        best_v = v;
      }
    }
    codes[t] = best_v;
  }
  return codes;
}

}  // namespace lasr::encoder
