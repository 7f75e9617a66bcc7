// lasr/diffkit/tape.h

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

#ifndef LASR_DIFFKIT_TAPE_H_
#define LASR_DIFFKIT_TAPE_H_

#include <cstddef>
#include <cstdint>
#include <vector>

#include "lasr/diffkit/tensor.h"

namespace lasr::diffkit {

class Tape;

/// Handle to a value recorded on a Tape. Cheap to copy; valid for the
/// lifetime of the tape that produced it.
class Var {
 public:
  Var() = default;

  Tape* tape() const { return tape_; }
  std::size_t id() const { return id_; }
  bool valid() const { return tape_ != nullptr; }
  const Tensor& value() const;

 private:
  friend class Tape;
  Var(Tape* tape, std::size_t id) : tape_(tape), id_(id) {}

  Tape* tape_ = nullptr;
  std::size_t id_ = 0;
};

/// The registered primitives. Every graph is a composition of these.
enum class Op : std::uint8_t {
  kLeaf,
  kMatMul,
  kTranspose,
  kAdd,
  kSub,
  kMul,
  kAddRow,
  kScale,
  kAddScalar,
  kRelu,
  kTanh,
  kSigmoid,
  kArccos,
  kHinge,
  kSum,
  kMean,
  kSegmentMean,
  kRowNorm,
  kRowNormalize,
  kGatherRows,
  kPick,
  kRowMax,
  kRowMin,
  kSoftmaxXent,
  kContextStack,
  kMaskReplace,
};

const char* OpName(Op op);

/// Arccos arguments are clamped to [-1 + kArccosClamp, 1 - kArccosClamp].
inline constexpr double kArccosClamp = 1e-7;

/// Records primitive applications in execution order and evaluates gradients
/// of a scalar output by a single reverse sweep.
///
/// Node ids are assigned in recording order, which is a topological order of
/// the graph, so the reverse sweep simply walks ids downwards.
class Tape {
 public:
  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  /// Differentiable leaf.
  Var Input(Tensor value);
  /// Leaf that never receives a gradient.
  Var Constant(Tensor value);

  const Tensor& value(Var v) const;
  /// Gradient accumulated by the last Backward(); zeros if none reached v.
  Tensor grad(Var v) const;
  bool requires_grad(Var v) const;

  /// Reverse-mode sweep from a single-element output. Clears gradients from
  /// any previous sweep first.
  void Backward(Var output);

  /// Recomputes every non-leaf node from the current leaf values, in
  /// recording order, and returns the recomputed values (index = node id).
  /// The recorded values are left untouched.
  std::vector<Tensor> Replay() const;

  std::size_t size() const { return nodes_.size(); }
  Op op(std::size_t id) const { return nodes_[id].op; }
  /// Node ids in the order the last Backward() processed them.
  const std::vector<std::size_t>& backward_order() const { return backward_order_; }

  struct Attrs {
    double scalar = 0.0;
    std::size_t count = 0;
    std::vector<std::size_t> a;
    std::vector<std::size_t> b;
    std::vector<std::uint8_t> mask;
  };

  /// Creates a node; used by the primitive functions below.
  Var Record(Op op, std::vector<Var> inputs, Attrs attrs);

 private:
  struct Node {
    Op op = Op::kLeaf;
    std::vector<std::size_t> inputs;
    Attrs attrs;
    Tensor value;
    Tensor grad;
    bool needs_grad = false;
    bool has_grad = false;
    // Column chosen per row by kRowMax / kRowMin.
    std::vector<std::size_t> selected;
  };

  void Check(Var v) const;
  static Tensor Forward(const Node& node, const std::vector<const Tensor*>& in,
                        std::vector<std::size_t>* selected);
  void BackwardNode(std::size_t id);
  Tensor& GradBuffer(std::size_t id);

  std::vector<Node> nodes_;
  std::vector<std::size_t> backward_order_;
};

// ---------------------------------------------------------------------------
// Primitives. Shapes are interpreted through the 2-D view of Tensor; any
// mismatch throws ShapeError naming the primitive and the offending shapes.

Var MatMul(Var a, Var b);
Var Transpose(Var a);
Var Add(Var a, Var b);
Var Sub(Var a, Var b);
/// Elementwise product.
Var Mul(Var a, Var b);
/// Adds a 1xC row to every row of an RxC matrix.
Var AddRow(Var a, Var row);
Var Scale(Var a, double s);
Var AddScalar(Var a, double s);
Var Relu(Var a);
Var Tanh(Var a);
Var Sigmoid(Var a);
/// arccos(clamp(x)); zero gradient where the clamp is active.
Var ClampedArccos(Var a);
/// max(0, x + margin). Gradient at the kink is 0.
Var Hinge(Var a, double margin = 0.0);
Var Sum(Var a);
Var Mean(Var a);
/// Mean over rows within each segment [offsets[i], offsets[i+1]).
Var SegmentMean(Var a, std::vector<std::size_t> offsets);
/// Mean over axis 0.
Var MeanRows(Var a);
/// L2 norm of each row, Rx1.
Var RowNorm(Var a);
/// Each row divided by its L2 norm. Zero rows are a DomainError.
Var RowNormalize(Var a);
Var GatherRows(Var a, std::vector<std::size_t> rows);
/// Output element k (row-major in out_rows x out_cols) is a(rows[k], cols[k]).
Var Pick(Var a, std::vector<std::size_t> rows, std::vector<std::size_t> cols,
         std::size_t out_rows, std::size_t out_cols);
/// Per-row max over the columns flagged in `candidates` (RxC, nonzero =
/// eligible). Ties go to the lowest column; the gradient routes entirely to
/// the selected element.
Var RowMax(Var a, std::vector<std::uint8_t> candidates);
Var RowMin(Var a, std::vector<std::uint8_t> candidates);
/// Mean over rows of -log softmax(logits[r])[targets[r]]. When row_lengths is
/// non-empty, row r only uses its first row_lengths[r] columns.
Var SoftmaxCrossEntropy(Var logits, std::vector<std::size_t> targets,
                        std::vector<std::size_t> row_lengths = {});
/// Stacks each frame with `context` neighbours on either side, within its
/// segment; out-of-segment neighbours are zero. NxF -> Nx(2c+1)F.
Var ContextStack(Var frames, std::vector<std::size_t> offsets, std::size_t context);
/// Replaces the listed rows of `frames` with `mask_row`.
Var MaskReplace(Var frames, Var mask_row, std::vector<std::size_t> positions);

}  // namespace lasr::diffkit

#endif  // LASR_DIFFKIT_TAPE_H_
