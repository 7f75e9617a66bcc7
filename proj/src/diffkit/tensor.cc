// diffkit/tensor.cc

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

#include "lasr/diffkit/tensor.h"

#include <cmath>
#include <cstring>
#include <functional>
#include <numeric>

#include "lasr/base/error.h"

namespace lasr::diffkit {

namespace {

std::size_t Product(const Tensor::Shape& shape) {
  std::size_t n = 1;
  for (std::size_t d : shape) {
    if (d == 0) Fail<ShapeError>("tensor dimensions must be positive, got ", ShapeString(shape));
    n *= d;
  }
  return n;
}

}  // namespace

Tensor::Tensor(Shape shape) : shape_(std::move(shape)) { data_.assign(Product(shape_), 0.0); }

Tensor::Tensor(Shape shape, std::vector<double> data)
    : shape_(std::move(shape)), data_(std::move(data)) {
  if (Product(shape_) != data_.size()) {
    Fail<ShapeError>("tensor shape ", ShapeString(shape_), " does not match ", data_.size(),
                     " values");
  }
}

Tensor Tensor::Vector(std::vector<double> v) {
  Shape s{v.size()};
  return Tensor(std::move(s), std::move(v));
}

Tensor Tensor::Matrix(std::size_t rows, std::size_t cols, std::vector<double> v) {
  return Tensor(Shape{rows, cols}, std::move(v));
}

double Tensor::item() const {
  if (data_.size() != 1) {
    Fail<ShapeError>("item() on tensor of shape ", ShapeString(shape_));
  }
  return data_[0];
}

void Tensor::Fill(double v) { std::fill(data_.begin(), data_.end(), v); }

bool Tensor::AllFinite() const {
  for (double v : data_)
    if (!std::isfinite(v)) return false;
  return true;
}

bool Tensor::Identical(const Tensor& other) const {
  return shape_ == other.shape_ &&
         std::memcmp(data_.data(), other.data_.data(), data_.size() * sizeof(double)) == 0;
}

std::string ShapeString(const Tensor::Shape& shape) {
  std::string s = "[";
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) s += "x";
    s += std::to_string(shape[i]);
  }
  return s + "]";
}

}  // namespace lasr::diffkit
