// diffkit/evaluate.cc

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

#include "lasr/diffkit/evaluate.h"

#include <algorithm>
#include <cmath>

#include "lasr/base/error.h"

namespace lasr::diffkit {

namespace {

void CheckWrt(const TensorMap& inputs, const std::set<std::string>& wrt) {
  for (const auto& name : wrt)
    if (!inputs.count(name)) Fail<ConfigError>("gradient requested for unknown input '", name, "'");
}

void RequireScalar(const Tensor& out) {
  if (out.size() != 1)
    Fail<ShapeError>("gradient requested for non-scalar output of shape ",
                     ShapeString(out.shape()));
}

Tensor Run(const Graph& graph, const TensorMap& inputs) {
  Tape tape;
  VarMap vars;
  for (const auto& [name, t] : inputs) vars.emplace(name, tape.Constant(t));
  return graph(tape, vars).value();
}

}  // namespace

Tensor Evaluate(const Graph& graph, const TensorMap& inputs) { return Run(graph, inputs); }

Evaluation EvaluateWithGradients(const Graph& graph, const TensorMap& inputs,
                                 const std::set<std::string>& wrt) {
  CheckWrt(inputs, wrt);
  Tape tape;
  VarMap vars;
  for (const auto& [name, t] : inputs)
    vars.emplace(name, wrt.count(name) ? tape.Input(t) : tape.Constant(t));
  Var out = graph(tape, vars);
  RequireScalar(out.value());
  tape.Backward(out);
  Evaluation ev;
  ev.value = out.value();
  for (const auto& name : wrt) ev.grads.emplace(name, tape.grad(vars.at(name)));
  return ev;
}

TensorMap FiniteDifferenceGradient(const Graph& graph, const TensorMap& inputs,
                                   const std::set<std::string>& wrt, double eps) {
  if (!(eps > 0.0 && eps <= 1e-2))
    Fail<DomainError>("finite-difference step must lie in (0, 1e-2], got ", eps);
  CheckWrt(inputs, wrt);
  RequireScalar(Run(graph, inputs));
  TensorMap grads;
  TensorMap probe = inputs;
  for (const auto& name : wrt) {
    Tensor g = Tensor::ZerosLike(inputs.at(name));
    Tensor& x = probe.at(name);
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double orig = x[i];
      x[i] = orig + eps;
      const double up = Run(graph, probe).item();
      x[i] = orig - eps;
      const double down = Run(graph, probe).item();
      x[i] = orig;
      g[i] = (up - down) / (2.0 * eps);
    }
    grads.emplace(name, std::move(g));
  }
  return grads;
}

double RelativeError(const Tensor& a, const Tensor& b, double floor) {
  if (a.size() != b.size()) Fail<ShapeError>("RelativeError: sizes differ");
  double diff = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    diff += (a[i] - b[i]) * (a[i] - b[i]);
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  return std::sqrt(diff) / std::max({std::sqrt(na), std::sqrt(nb), floor});
}

}  // namespace lasr::diffkit
