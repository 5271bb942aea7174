// Copyright 2026 The logit-dp Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "logitdp/errors.hpp"

namespace logitdp {

// Dense row-major tensor of 64-bit floats. Entries are validated to be finite
// at construction; NaN or Inf data is rejected.
class Tensor {
 public:
  Tensor() = default;

  // Zero tensor of the given shape.
  explicit Tensor(std::vector<std::size_t> shape);

  Tensor(std::vector<std::size_t> shape, std::vector<double> data);

  static Tensor matrix(std::size_t rows, std::size_t cols) {
    return Tensor({rows, cols});
  }
  static Tensor vector(std::vector<double> data);

  const std::vector<std::size_t>& shape() const { return shape_; }
  std::size_t size() const { return data_.size(); }
  std::size_t rank() const { return shape_.size(); }

  std::size_t rows() const;
  std::size_t cols() const;

  double& operator()(std::size_t r, std::size_t c) {
    return data_[r * cols_ + c];
  }
  double operator()(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }
  double& operator[](std::size_t i) { return data_[i]; }
  double operator[](std::size_t i) const { return data_[i]; }

  std::span<double> row(std::size_t r) {
    return {data_.data() + r * cols_, cols_};
  }
  std::span<const double> row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }

  std::span<double> data() { return data_; }
  std::span<const double> data() const { return data_; }

  bool same_shape(const Tensor& other) const { return shape_ == other.shape_; }
  bool operator==(const Tensor& other) const {
    return shape_ == other.shape_ && data_ == other.data_;
  }

 private:
  std::vector<std::size_t> shape_;
  std::size_t cols_ = 0;  // trailing dimension, cached for 2-D indexing
  std::vector<double> data_;
};

// L2 norm of a flat vector, accumulated left to right.
double l2_norm(std::span<const double> v);

// <u, v> accumulated left to right.
double dot(std::span<const double> u, std::span<const double> v);

void require_all_finite(std::span<const double> data, const char* what);

}  // namespace logitdp
