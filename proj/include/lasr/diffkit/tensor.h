// lasr/diffkit/tensor.h

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

#ifndef LASR_DIFFKIT_TENSOR_H_
#define LASR_DIFFKIT_TENSOR_H_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace lasr::diffkit {

/// Dense row-major tensor of doubles.
///
/// The primitives in this module are all matrix primitives, so every tensor
/// also has a 2-D view: a scalar is 1x1, a vector of length n is 1xn and a
/// higher-rank tensor folds its leading dimensions into rows.
class Tensor {
 public:
  using Shape = std::vector<std::size_t>;

  /// Scalar zero.
  Tensor() : data_(1, 0.0) {}
  explicit Tensor(Shape shape);
  Tensor(Shape shape, std::vector<double> data);

  static Tensor Scalar(double v) { return Tensor(Shape{}, {v}); }
  static Tensor Vector(std::vector<double> v);
  static Tensor Matrix(std::size_t rows, std::size_t cols, std::vector<double> v);
  static Tensor Zeros(std::size_t rows, std::size_t cols) { return Tensor(Shape{rows, cols}); }
  static Tensor ZerosLike(const Tensor& t) { return Tensor(t.shape_); }

  const Shape& shape() const { return shape_; }
  std::size_t rank() const { return shape_.size(); }
  std::size_t size() const { return data_.size(); }
  std::size_t rows() const { return shape_.size() < 2 ? 1 : data_.size() / shape_.back(); }
  std::size_t cols() const { return shape_.empty() ? 1 : shape_.back(); }

  std::span<double> data() { return data_; }
  std::span<const double> data() const { return data_; }
  double* ptr() { return data_.data(); }
  const double* ptr() const { return data_.data(); }
  std::span<double> row(std::size_t r) { return {data_.data() + r * cols(), cols()}; }
  std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols(), cols()}; }

  double& operator[](std::size_t i) { return data_[i]; }
  double operator[](std::size_t i) const { return data_[i]; }
  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols() + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols() + c]; }

  /// Value of a single-element tensor.
  double item() const;
  void Fill(double v);
  bool AllFinite() const;

  /// Bitwise equality of shape and contents.
  bool Identical(const Tensor& other) const;

 private:
  Shape shape_;
  std::vector<double> data_;
};

std::string ShapeString(const Tensor::Shape& shape);

}  // namespace lasr::diffkit

#endif  // LASR_DIFFKIT_TENSOR_H_
