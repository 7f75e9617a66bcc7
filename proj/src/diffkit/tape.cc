// diffkit/tape.cc

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

#include "lasr/diffkit/tape.h"

#include <algorithm>
#include <cmath>
#include <utility>

#include "kernels.h"
#include "lasr/base/error.h"

namespace lasr::diffkit {

namespace {

using Shape = Tensor::Shape;

[[noreturn]] void ShapeFail(Op op, const std::string& what, const Tensor& a) {
  Fail<ShapeError>(OpName(op), ": ", what, " (input ", ShapeString(a.shape()), ")");
}

[[noreturn]] void ShapeFail(Op op, const std::string& what, const Tensor& a, const Tensor& b) {
  Fail<ShapeError>(OpName(op), ": ", what, " (inputs ", ShapeString(a.shape()), " and ",
                   ShapeString(b.shape()), ")");
}

void RequireSame2d(Op op, const Tensor& a, const Tensor& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols() || a.size() != b.size())
    ShapeFail(op, "operand shapes differ", a, b);
}

void CheckOffsets(Op op, const std::vector<std::size_t>& offsets, const Tensor& a) {
  if (offsets.size() < 2 || offsets.front() != 0 || offsets.back() != a.rows())
    ShapeFail(op, "segment offsets must run from 0 to the row count", a);
  for (std::size_t i = 1; i < offsets.size(); ++i)
    if (offsets[i] <= offsets[i - 1]) ShapeFail(op, "segments must be non-empty", a);
}

double StableSigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

constexpr double kArccosLo = -1.0 + kArccosClamp;
constexpr double kArccosHi = 1.0 - kArccosClamp;

template <typename Fn>
Tensor Map(const Tensor& a, Fn fn) {
  Tensor out(a.shape());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = fn(a[i]);
  return out;
}

}  // namespace

const char* OpName(Op op) {
  switch (op) {
    case Op::kLeaf: return "leaf";
    case Op::kMatMul: return "matmul";
    case Op::kTranspose: return "transpose";
    case Op::kAdd: return "add";
    case Op::kSub: return "sub";
    case Op::kMul: return "mul";
    case Op::kAddRow: return "add_row";
    case Op::kScale: return "scale";
    case Op::kAddScalar: return "add_scalar";
    case Op::kRelu: return "relu";
    case Op::kTanh: return "tanh";
    case Op::kSigmoid: return "sigmoid";
    case Op::kArccos: return "clamped_arccos";
    case Op::kHinge: return "hinge";
    case Op::kSum: return "sum";
    case Op::kMean: return "mean";
    case Op::kSegmentMean: return "segment_mean";
    case Op::kRowNorm: return "row_norm";
    case Op::kRowNormalize: return "row_normalize";
    case Op::kGatherRows: return "gather_rows";
    case Op::kPick: return "pick";
    case Op::kRowMax: return "row_max";
    case Op::kRowMin: return "row_min";
    case Op::kSoftmaxXent: return "softmax_cross_entropy";
    case Op::kContextStack: return "context_stack";
    case Op::kMaskReplace: return "mask_replace";
  }
  return "unknown";
}

const Tensor& Var::value() const {
  if (!tape_) Fail<Error>("value() on an unbound Var");
  return tape_->value(*this);
}

Var Tape::Input(Tensor value) {
  Node n;
  n.value = std::move(value);
  n.needs_grad = true;
  nodes_.push_back(std::move(n));
  return Var(this, nodes_.size() - 1);
}

Var Tape::Constant(Tensor value) {
  Node n;
  n.value = std::move(value);
  nodes_.push_back(std::move(n));
  return Var(this, nodes_.size() - 1);
}

void Tape::Check(Var v) const {
  if (v.tape_ != this || v.id_ >= nodes_.size()) Fail<Error>("Var does not belong to this tape");
}

const Tensor& Tape::value(Var v) const {
  Check(v);
  return nodes_[v.id_].value;
}

Tensor Tape::grad(Var v) const {
  Check(v);
  const Node& n = nodes_[v.id_];
  if (n.has_grad) return n.grad;
  return Tensor::ZerosLike(n.value);
}

bool Tape::requires_grad(Var v) const {
  Check(v);
  return nodes_[v.id_].needs_grad;
}

Var Tape::Record(Op op, std::vector<Var> inputs, Attrs attrs) {
  Node n;
  n.op = op;
  n.attrs = std::move(attrs);
  std::vector<const Tensor*> in;
  for (const Var& v : inputs) {
    Check(v);
    n.inputs.push_back(v.id_);
    n.needs_grad = n.needs_grad || nodes_[v.id_].needs_grad;
    in.push_back(&nodes_[v.id_].value);
  }
  n.value = Forward(n, in, &n.selected);
  nodes_.push_back(std::move(n));
  return Var(this, nodes_.size() - 1);
}

std::vector<Tensor> Tape::Replay() const {
  std::vector<Tensor> values(nodes_.size());
  for (std::size_t id = 0; id < nodes_.size(); ++id) {
    const Node& n = nodes_[id];
    if (n.op == Op::kLeaf) {
      values[id] = n.value;
      continue;
    }
    std::vector<const Tensor*> in;
    for (std::size_t i : n.inputs) in.push_back(&values[i]);
    std::vector<std::size_t> selected;
    values[id] = Forward(n, in, &selected);
  }
  return values;
}

Tensor Tape::Forward(const Node& node, const std::vector<const Tensor*>& in,
                     std::vector<std::size_t>* selected) {
  const Op op = node.op;
  const Attrs& at = node.attrs;
  switch (op) {
    case Op::kLeaf:
      break;
    case Op::kMatMul: {
      const Tensor& a = *in[0];
      const Tensor& b = *in[1];
      if (a.cols() != b.rows()) ShapeFail(op, "inner dimensions differ", a, b);
      Tensor out = Tensor::Zeros(a.rows(), b.cols());
      kernels::Gemm(a.ptr(), b.ptr(), out.ptr(), a.rows(), a.cols(), b.cols());
      return out;
    }
    case Op::kTranspose: {
      const Tensor& a = *in[0];
      Tensor out = Tensor::Zeros(a.cols(), a.rows());
      kernels::Transpose(a.ptr(), out.ptr(), a.rows(), a.cols());
      return out;
    }
    case Op::kAdd:
    case Op::kSub:
    case Op::kMul: {
      const Tensor& a = *in[0];
      const Tensor& b = *in[1];
      RequireSame2d(op, a, b);
      Tensor out(a.shape());
      for (std::size_t i = 0; i < a.size(); ++i) {
        out[i] = op == Op::kAdd ? a[i] + b[i] : op == Op::kSub ? a[i] - b[i] : a[i] * b[i];
      }
      return out;
    }
    case Op::kAddRow: {
      const Tensor& a = *in[0];
      const Tensor& row = *in[1];
      if (row.size() != a.cols()) ShapeFail(op, "row length must equal column count", a, row);
      Tensor out(a.shape());
      const std::size_t c = a.cols();
      for (std::size_t r = 0; r < a.rows(); ++r)
        for (std::size_t j = 0; j < c; ++j) out[r * c + j] = a[r * c + j] + row[j];
      return out;
    }
    case Op::kScale:
      return Map(*in[0], [s = at.scalar](double x) { return s * x; });
    case Op::kAddScalar:
      return Map(*in[0], [s = at.scalar](double x) { return x + s; });
    case Op::kRelu:
      return Map(*in[0], [](double x) { return x > 0.0 ? x : 0.0; });
    case Op::kTanh:
      return Map(*in[0], [](double x) { return std::tanh(x); });
    case Op::kSigmoid:
      return Map(*in[0], StableSigmoid);
    case Op::kArccos:
      return Map(*in[0], [](double x) { return std::acos(std::clamp(x, kArccosLo, kArccosHi)); });
    case Op::kHinge:
      return Map(*in[0], [m = at.scalar](double x) { return x + m > 0.0 ? x + m : 0.0; });
    case Op::kSum:
    case Op::kMean: {
      const Tensor& a = *in[0];
      double s = 0.0;
      for (double x : a.data()) s += x;
      if (op == Op::kMean) s /= static_cast<double>(a.size());
      return Tensor::Scalar(s);
    }
    case Op::kSegmentMean: {
      const Tensor& a = *in[0];
      CheckOffsets(op, at.a, a);
      const std::size_t segs = at.a.size() - 1;
      const std::size_t c = a.cols();
      Tensor out = Tensor::Zeros(segs, c);
      for (std::size_t s = 0; s < segs; ++s) {
        double* o = out.ptr() + s * c;
        for (std::size_t t = at.a[s]; t < at.a[s + 1]; ++t) {
          const double* x = a.ptr() + t * c;
          for (std::size_t j = 0; j < c; ++j) o[j] += x[j];
        }
        const double inv = 1.0 / static_cast<double>(at.a[s + 1] - at.a[s]);
        for (std::size_t j = 0; j < c; ++j) o[j] *= inv;
      }
      return out;
    }
    case Op::kRowNorm:
    case Op::kRowNormalize: {
      const Tensor& a = *in[0];
      const std::size_t c = a.cols();
      Tensor out = op == Op::kRowNorm ? Tensor::Zeros(a.rows(), 1) : Tensor(a.shape());
      for (std::size_t r = 0; r < a.rows(); ++r) {
        double ss = 0.0;
        for (std::size_t j = 0; j < c; ++j) ss += a[r * c + j] * a[r * c + j];
        const double norm = std::sqrt(ss);
        if (op == Op::kRowNorm) {
          out[r] = norm;
          continue;
        }
        if (norm == 0.0) Fail<DomainError>(OpName(op), ": row ", r, " has zero norm");
        for (std::size_t j = 0; j < c; ++j) out[r * c + j] = a[r * c + j] / norm;
      }
      return out;
    }
    case Op::kGatherRows: {
      const Tensor& a = *in[0];
      const std::size_t c = a.cols();
      if (at.a.empty()) ShapeFail(op, "no rows requested", a);
      Tensor out = Tensor::Zeros(at.a.size(), c);
      for (std::size_t i = 0; i < at.a.size(); ++i) {
        if (at.a[i] >= a.rows()) ShapeFail(op, "row index out of range", a);
        std::copy_n(a.ptr() + at.a[i] * c, c, out.ptr() + i * c);
      }
      return out;
    }
    case Op::kPick: {
      const Tensor& a = *in[0];
      if (at.a.size() != at.b.size() || at.a.empty() || at.count == 0 ||
          at.a.size() % at.count != 0)
        ShapeFail(op, "index lists do not fill the output shape", a);
      Tensor out = Tensor::Zeros(at.count, at.a.size() / at.count);
      for (std::size_t k = 0; k < at.a.size(); ++k) {
        if (at.a[k] >= a.rows() || at.b[k] >= a.cols()) ShapeFail(op, "index out of range", a);
        out[k] = a(at.a[k], at.b[k]);
      }
      return out;
    }
    case Op::kRowMax:
    case Op::kRowMin: {
      const Tensor& a = *in[0];
      if (at.mask.size() != a.size()) ShapeFail(op, "candidate mask must match input", a);
      const std::size_t c = a.cols();
      Tensor out = Tensor::Zeros(a.rows(), 1);
      selected->assign(a.rows(), 0);
      for (std::size_t r = 0; r < a.rows(); ++r) {
        bool found = false;
        double best = 0.0;
        for (std::size_t j = 0; j < c; ++j) {
          if (!at.mask[r * c + j]) continue;
          const double v = a[r * c + j];
          // Strict comparison keeps the lowest index on ties.
          if (!found || (op == Op::kRowMax ? v > best : v < best)) {
            best = v;
            (*selected)[r] = j;
            found = true;
          }
        }
        if (!found) Fail<DomainError>(OpName(op), ": row ", r, " has no candidate columns");
        out[r] = best;
      }
      return out;
    }
    case Op::kSoftmaxXent: {
      const Tensor& a = *in[0];
      const std::size_t rows = a.rows(), c = a.cols();
      if (at.a.size() != rows) ShapeFail(op, "need one target per row", a);
      if (!at.b.empty() && at.b.size() != rows) ShapeFail(op, "need one length per row", a);
      double total = 0.0;
      for (std::size_t r = 0; r < rows; ++r) {
        const std::size_t len = at.b.empty() ? c : at.b[r];
        if (len == 0 || len > c || at.a[r] >= len) ShapeFail(op, "target outside row", a);
        const double* x = a.ptr() + r * c;
        const double mx = *std::max_element(x, x + len);
        double z = 0.0;
        for (std::size_t j = 0; j < len; ++j) z += std::exp(x[j] - mx);
        total += std::log(z) + mx - x[at.a[r]];
      }
      return Tensor::Scalar(total / static_cast<double>(rows));
    }
    case Op::kContextStack: {
      const Tensor& a = *in[0];
      CheckOffsets(op, at.a, a);
      const std::size_t f = a.cols(), ctx = at.count, width = (2 * ctx + 1) * f;
      Tensor out = Tensor::Zeros(a.rows(), width);
      for (std::size_t s = 0; s + 1 < at.a.size(); ++s) {
        const std::size_t lo = at.a[s], hi = at.a[s + 1];
        for (std::size_t t = lo; t < hi; ++t) {
          double* o = out.ptr() + t * width;
          for (std::size_t k = 0; k <= 2 * ctx; ++k) {
            // Neighbour t - ctx + k, kept only inside the segment.
            if (t + k < lo + ctx || t + k >= hi + ctx) continue;
            std::copy_n(a.ptr() + (t + k - ctx) * f, f, o + k * f);
          }
        }
      }
      return out;
    }
    case Op::kMaskReplace: {
      const Tensor& a = *in[0];
      const Tensor& m = *in[1];
      if (m.size() != a.cols()) ShapeFail(op, "mask row length must equal frame width", a, m);
      Tensor out = a;
      for (std::size_t p : at.a) {
        if (p >= a.rows()) ShapeFail(op, "masked position out of range", a);
        std::copy_n(m.ptr(), m.size(), out.ptr() + p * a.cols());
      }
      return out;
    }
  }
  Fail<Error>("unhandled primitive ", OpName(op));
}

Tensor& Tape::GradBuffer(std::size_t id) {
  Node& n = nodes_[id];
  if (!n.has_grad) {
    n.grad = Tensor::ZerosLike(n.value);
    n.has_grad = true;
  }
  return n.grad;
}

void Tape::Backward(Var output) {
  Check(output);
  if (nodes_[output.id_].value.size() != 1) {
    Fail<ShapeError>("gradient requested for non-scalar output of shape ",
                     ShapeString(nodes_[output.id_].value.shape()));
  }
  for (Node& n : nodes_) {
    n.has_grad = false;
    n.grad = Tensor();
  }
  backward_order_.clear();
  GradBuffer(output.id_)[0] = 1.0;
  for (std::size_t id = output.id_ + 1; id-- > 0;) {
    const Node& n = nodes_[id];
    if (!n.has_grad || !n.needs_grad) continue;
    backward_order_.push_back(id);
    if (n.op != Op::kLeaf) BackwardNode(id);
  }
}

void Tape::BackwardNode(std::size_t id) {
  // GradBuffer never resizes nodes_, so the references below stay valid.
  const Node& n = nodes_[id];
  const Tensor& g = n.grad;
  const Tensor& y = n.value;
  const Attrs& at = n.attrs;
  auto wants = [&](std::size_t k) { return nodes_[n.inputs[k]].needs_grad; };
  auto in = [&](std::size_t k) -> const Tensor& { return nodes_[n.inputs[k]].value; };

  switch (n.op) {
    case Op::kLeaf:
      break;
    case Op::kMatMul: {
      const Tensor& a = in(0);
      const Tensor& b = in(1);
      const std::size_t m = a.rows(), k = a.cols(), nn = b.cols();
      if (wants(0)) {
        std::vector<double> bt(b.size());
        kernels::Transpose(b.ptr(), bt.data(), k, nn);
        kernels::GemmAccumulate(g.ptr(), bt.data(), GradBuffer(n.inputs[0]).ptr(), m, nn, k);
      }
      if (wants(1)) {
        std::vector<double> atr(a.size());
        kernels::Transpose(a.ptr(), atr.data(), m, k);
        kernels::GemmAccumulate(atr.data(), g.ptr(), GradBuffer(n.inputs[1]).ptr(), k, m, nn);
      }
      break;
    }
    case Op::kTranspose: {
      if (!wants(0)) break;
      Tensor& ga = GradBuffer(n.inputs[0]);
      const std::size_t r = in(0).rows(), c = in(0).cols();
      for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) ga[i * c + j] += g[j * r + i];
      break;
    }
    case Op::kAdd:
    case Op::kSub:
    case Op::kMul: {
      if (wants(0)) {
        Tensor& ga = GradBuffer(n.inputs[0]);
        if (n.op == Op::kMul) {
          const Tensor& b = in(1);
          for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i] * b[i];
        } else {
          for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i];
        }
      }
      if (wants(1)) {
        Tensor& gb = GradBuffer(n.inputs[1]);
        if (n.op == Op::kMul) {
          const Tensor& a = in(0);
          for (std::size_t i = 0; i < g.size(); ++i) gb[i] += g[i] * a[i];
        } else if (n.op == Op::kSub) {
          for (std::size_t i = 0; i < g.size(); ++i) gb[i] -= g[i];
        } else {
          for (std::size_t i = 0; i < g.size(); ++i) gb[i] += g[i];
        }
      }
      break;
    }
    case Op::kAddRow: {
      if (wants(0)) {
        Tensor& ga = GradBuffer(n.inputs[0]);
        for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i];
      }
      if (wants(1)) {
        Tensor& gr = GradBuffer(n.inputs[1]);
        const std::size_t c = g.cols();
        for (std::size_t r = 0; r < g.rows(); ++r)
          for (std::size_t j = 0; j < c; ++j) gr[j] += g[r * c + j];
      }
      break;
    }
    case Op::kScale:
    case Op::kAddScalar:
    case Op::kRelu:
    case Op::kTanh:
    case Op::kSigmoid:
    case Op::kArccos:
    case Op::kHinge: {
      if (!wants(0)) break;
      Tensor& ga = GradBuffer(n.inputs[0]);
      const Tensor& x = in(0);
      for (std::size_t i = 0; i < g.size(); ++i) {
        double d = 0.0;
        switch (n.op) {
          case Op::kScale: d = at.scalar; break;
          case Op::kAddScalar: d = 1.0; break;
          case Op::kRelu: d = x[i] > 0.0 ? 1.0 : 0.0; break;
          case Op::kTanh: d = 1.0 - y[i] * y[i]; break;
          case Op::kSigmoid: d = y[i] * (1.0 - y[i]); break;
          case Op::kArccos:
            d = (x[i] > kArccosLo && x[i] < kArccosHi) ? -1.0 / std::sqrt(1.0 - x[i] * x[i])
                                                       : 0.0;
            break;
          case Op::kHinge: d = x[i] + at.scalar > 0.0 ? 1.0 : 0.0; break;
          default: break;
        }
        ga[i] += g[i] * d;
      }
      break;
    }
    case Op::kSum:
    case Op::kMean: {
      if (!wants(0)) break;
      Tensor& ga = GradBuffer(n.inputs[0]);
      const double d = n.op == Op::kSum ? g[0] : g[0] / static_cast<double>(ga.size());
      for (std::size_t i = 0; i < ga.size(); ++i) ga[i] += d;
      break;
    }
    case Op::kSegmentMean: {
      if (!wants(0)) break;
      Tensor& ga = GradBuffer(n.inputs[0]);
      const std::size_t c = ga.cols();
      for (std::size_t s = 0; s + 1 < at.a.size(); ++s) {
        const double inv = 1.0 / static_cast<double>(at.a[s + 1] - at.a[s]);
        for (std::size_t t = at.a[s]; t < at.a[s + 1]; ++t)
          for (std::size_t j = 0; j < c; ++j) ga[t * c + j] += g[s * c + j] * inv;
      }
      break;
    }
    case Op::kRowNorm: {
      if (!wants(0)) break;
      Tensor& ga = GradBuffer(n.inputs[0]);
      const Tensor& x = in(0);
      const std::size_t c = x.cols();
      for (std::size_t r = 0; r < x.rows(); ++r) {
        if (y[r] == 0.0) continue;
        for (std::size_t j = 0; j < c; ++j) ga[r * c + j] += g[r] * x[r * c + j] / y[r];
      }
      break;
    }
    case Op::kRowNormalize: {
      if (!wants(0)) break;
      Tensor& ga = GradBuffer(n.inputs[0]);
      const Tensor& x = in(0);
      const std::size_t c = x.cols();
      for (std::size_t r = 0; r < x.rows(); ++r) {
        double ss = 0.0, dot = 0.0;
        for (std::size_t j = 0; j < c; ++j) {
          ss += x[r * c + j] * x[r * c + j];
          dot += y[r * c + j] * g[r * c + j];
        }
        const double norm = std::sqrt(ss);
        for (std::size_t j = 0; j < c; ++j)
          ga[r * c + j] += (g[r * c + j] - y[r * c + j] * dot) / norm;
      }
      break;
    }
    case Op::kGatherRows: {
      if (!wants(0)) break;
      Tensor& ga = GradBuffer(n.inputs[0]);
      const std::size_t c = ga.cols();
      for (std::size_t i = 0; i < at.a.size(); ++i)
        for (std::size_t j = 0; j < c; ++j) ga[at.a[i] * c + j] += g[i * c + j];
      break;
    }
    case Op::kPick: {
      if (!wants(0)) break;
      Tensor& ga = GradBuffer(n.inputs[0]);
      const std::size_t c = ga.cols();
      for (std::size_t k = 0; k < at.a.size(); ++k) ga[at.a[k] * c + at.b[k]] += g[k];
      break;
    }
    case Op::kRowMax:
    case Op::kRowMin: {
      if (!wants(0)) break;
      Tensor& ga = GradBuffer(n.inputs[0]);
      const std::size_t c = ga.cols();
      for (std::size_t r = 0; r < n.selected.size(); ++r) ga[r * c + n.selected[r]] += g[r];
      break;
    }
    case Op::kSoftmaxXent: {
      if (!wants(0)) break;
      Tensor& ga = GradBuffer(n.inputs[0]);
      const Tensor& x = in(0);
      const std::size_t rows = x.rows(), c = x.cols();
      const double scale = g[0] / static_cast<double>(rows);
      for (std::size_t r = 0; r < rows; ++r) {
        const std::size_t len = at.b.empty() ? c : at.b[r];
        const double* xr = x.ptr() + r * c;
        const double mx = *std::max_element(xr, xr + len);
        double z = 0.0;
        for (std::size_t j = 0; j < len; ++j) z += std::exp(xr[j] - mx);
        for (std::size_t j = 0; j < len; ++j) {
          const double p = std::exp(xr[j] - mx) / z;
          ga[r * c + j] += scale * (p - (j == at.a[r] ? 1.0 : 0.0));
        }
      }
      break;
    }
    case Op::kContextStack: {
      if (!wants(0)) break;
      Tensor& ga = GradBuffer(n.inputs[0]);
      const std::size_t f = ga.cols(), ctx = at.count, width = (2 * ctx + 1) * f;
      for (std::size_t s = 0; s + 1 < at.a.size(); ++s) {
        const std::size_t lo = at.a[s], hi = at.a[s + 1];
        for (std::size_t t = lo; t < hi; ++t) {
          const double* gr = g.ptr() + t * width;
          for (std::size_t k = 0; k <= 2 * ctx; ++k) {
            if (t + k < lo + ctx || t + k >= hi + ctx) continue;
            double* dst = ga.ptr() + (t + k - ctx) * f;
            for (std::size_t j = 0; j < f; ++j) dst[j] += gr[k * f + j];
          }
        }
      }
      break;
    }
    case Op::kMaskReplace: {
      const std::size_t c = g.cols();
      std::vector<std::uint8_t> masked(g.rows(), 0);
      for (std::size_t p : at.a) masked[p] = 1;
      if (wants(0)) {
        Tensor& ga = GradBuffer(n.inputs[0]);
        for (std::size_t r = 0; r < g.rows(); ++r) {
          if (masked[r]) continue;
          for (std::size_t j = 0; j < c; ++j) ga[r * c + j] += g[r * c + j];
        }
      }
      if (wants(1)) {
        Tensor& gm = GradBuffer(n.inputs[1]);
        for (std::size_t r = 0; r < g.rows(); ++r) {
          if (!masked[r]) continue;
          for (std::size_t j = 0; j < c; ++j) gm[j] += g[r * c + j];
        }
      }
      break;
    }
  }
}

// ---------------------------------------------------------------------------

namespace {

Tape& TapeOf(Var v) {
  if (!v.valid()) Fail<Error>("primitive applied to an unbound Var");
  return *v.tape();
}

Var Unary(Op op, Var a, Tape::Attrs attrs = {}) {
  return TapeOf(a).Record(op, {a}, std::move(attrs));
}

Var Binary(Op op, Var a, Var b, Tape::Attrs attrs = {}) {
  if (a.tape() != b.tape()) Fail<Error>(OpName(op), ": operands recorded on different tapes");
  return TapeOf(a).Record(op, {a, b}, std::move(attrs));
}

Tape::Attrs WithScalar(double s) {
  Tape::Attrs at;
  at.scalar = s;
  return at;
}

Tape::Attrs WithIndex(std::vector<std::size_t> a, std::size_t count = 0) {
  Tape::Attrs at;
  at.a = std::move(a);
  at.count = count;
  return at;
}

}  // namespace

Var MatMul(Var a, Var b) { return Binary(Op::kMatMul, a, b); }
Var Transpose(Var a) { return Unary(Op::kTranspose, a); }
Var Add(Var a, Var b) { return Binary(Op::kAdd, a, b); }
Var Sub(Var a, Var b) { return Binary(Op::kSub, a, b); }
Var Mul(Var a, Var b) { return Binary(Op::kMul, a, b); }
Var AddRow(Var a, Var row) { return Binary(Op::kAddRow, a, row); }
Var Scale(Var a, double s) { return Unary(Op::kScale, a, WithScalar(s)); }
Var AddScalar(Var a, double s) { return Unary(Op::kAddScalar, a, WithScalar(s)); }
Var Relu(Var a) { return Unary(Op::kRelu, a); }
Var Tanh(Var a) { return Unary(Op::kTanh, a); }
Var Sigmoid(Var a) { return Unary(Op::kSigmoid, a); }
Var ClampedArccos(Var a) { return Unary(Op::kArccos, a); }
Var Hinge(Var a, double margin) { return Unary(Op::kHinge, a, WithScalar(margin)); }
Var Sum(Var a) { return Unary(Op::kSum, a); }
Var Mean(Var a) { return Unary(Op::kMean, a); }

Var SegmentMean(Var a, std::vector<std::size_t> offsets) {
  return Unary(Op::kSegmentMean, a, WithIndex(std::move(offsets)));
}

Var MeanRows(Var a) { return SegmentMean(a, {0, a.value().rows()}); }
Var RowNorm(Var a) { return Unary(Op::kRowNorm, a); }
Var RowNormalize(Var a) { return Unary(Op::kRowNormalize, a); }

Var GatherRows(Var a, std::vector<std::size_t> rows) {
  return Unary(Op::kGatherRows, a, WithIndex(std::move(rows)));
}

Var Pick(Var a, std::vector<std::size_t> rows, std::vector<std::size_t> cols,
         std::size_t out_rows, std::size_t out_cols) {
  Tape::Attrs at = WithIndex(std::move(rows), out_rows);
  at.b = std::move(cols);
  if (out_rows * out_cols != at.a.size())
    Fail<ShapeError>("pick: ", at.a.size(), " indices cannot fill ", out_rows, "x", out_cols);
  return Unary(Op::kPick, a, std::move(at));
}

Var RowMax(Var a, std::vector<std::uint8_t> candidates) {
  Tape::Attrs at;
  at.mask = std::move(candidates);
  return Unary(Op::kRowMax, a, std::move(at));
}

Var RowMin(Var a, std::vector<std::uint8_t> candidates) {
  Tape::Attrs at;
  at.mask = std::move(candidates);
  return Unary(Op::kRowMin, a, std::move(at));
}

Var SoftmaxCrossEntropy(Var logits, std::vector<std::size_t> targets,
                        std::vector<std::size_t> row_lengths) {
  Tape::Attrs at = WithIndex(std::move(targets));
  at.b = std::move(row_lengths);
  return Unary(Op::kSoftmaxXent, logits, std::move(at));
}

Var ContextStack(Var frames, std::vector<std::size_t> offsets, std::size_t context) {
  return Unary(Op::kContextStack, frames, WithIndex(std::move(offsets), context));
}

Var MaskReplace(Var frames, Var mask_row, std::vector<std::size_t> positions) {
  return Binary(Op::kMaskReplace, frames, mask_row, WithIndex(std::move(positions)));
}

}  // namespace lasr::diffkit
