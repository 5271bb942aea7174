// Copyright 2026 The logit-dp Authors.
// SPDX-License-Identifier: Apache-2.0

#include "logitdp/tensor.hpp"

#include <cmath>
#include <numeric>
#include <string>

namespace logitdp {

namespace {

std::size_t shape_product(const std::vector<std::size_t>& shape) {
  std::size_t n = 1;
  for (std::size_t d : shape) n *= d;
  return n;
}

}  // namespace

void require_all_finite(std::span<const double> data, const char* what) {
  for (double v : data) {
    if (!std::isfinite(v)) {
      throw DomainError(std::string(what) + ": non-finite entry");
    }
  }
}

Tensor::Tensor(std::vector<std::size_t> shape)
    : shape_(std::move(shape)),
      cols_(shape_.empty() ? 1 : shape_.back()),
      data_(shape_product(shape_), 0.0) {}

Tensor::Tensor(std::vector<std::size_t> shape, std::vector<double> data)
    : shape_(std::move(shape)),
      cols_(shape_.empty() ? 1 : shape_.back()),
      data_(std::move(data)) {
  if (data_.size() != shape_product(shape_)) {
    throw ShapeError("Tensor: data length does not match shape");
  }
  require_all_finite(data_, "Tensor");
}

Tensor Tensor::vector(std::vector<double> data) {
  const std::size_t n = data.size();
  return Tensor({n}, std::move(data));
}

std::size_t Tensor::rows() const {
  if (rank() != 2) throw ShapeError("Tensor::rows: not a matrix");
  return shape_[0];
}

std::size_t Tensor::cols() const {
  if (rank() != 2) throw ShapeError("Tensor::cols: not a matrix");
  return shape_[1];
}

double l2_norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

double dot(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size()) throw ShapeError("dot: length mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) s += u[i] * v[i];
  return s;
}

}  // namespace logitdp
