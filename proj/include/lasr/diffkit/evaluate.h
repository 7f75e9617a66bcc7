// lasr/diffkit/evaluate.h

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

#ifndef LASR_DIFFKIT_EVALUATE_H_
#define LASR_DIFFKIT_EVALUATE_H_

#include <functional>
#include <map>
#include <set>
#include <string>

#include "lasr/diffkit/tape.h"
#include "lasr/diffkit/tensor.h"

namespace lasr::diffkit {

using TensorMap = std::map<std::string, Tensor>;
using VarMap = std::map<std::string, Var>;

/// A graph is any function that composes primitives over named inputs that
/// have already been placed on the tape.
using Graph = std::function<Var(Tape&, const VarMap&)>;

struct Evaluation {
  Tensor value;
  TensorMap grads;
};

/// Pure forward evaluation.
Tensor Evaluate(const Graph& graph, const TensorMap& inputs);

/// Forward evaluation plus reverse-mode gradients of a scalar output with
/// respect to each input named in `wrt`. Inputs outside `wrt` are constants.
Evaluation EvaluateWithGradients(const Graph& graph, const TensorMap& inputs,
                                 const std::set<std::string>& wrt);

/// Central-difference estimate (f(x + eps e) - f(x - eps e)) / (2 eps) per
/// coordinate of each input in `wrt`. eps must lie in (0, 1e-2].
TensorMap FiniteDifferenceGradient(const Graph& graph, const TensorMap& inputs,
                                   const std::set<std::string>& wrt, double eps);

/// ||a - b||_2 / max(||a||_2, ||b||_2, floor). Used by every gradient check.
double RelativeError(const Tensor& a, const Tensor& b, double floor = 1e-8);

}  // namespace lasr::diffkit

#endif  // LASR_DIFFKIT_EVALUATE_H_
