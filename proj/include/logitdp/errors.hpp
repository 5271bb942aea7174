// Copyright 2026 The logit-dp Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace logitdp {

// Tensor/model dimension mismatches.
class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Invalid argument values (non-positive clip bound, delta >= 1, n < 2, ...).
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Cosine similarity requested for a zero-norm embedding.
class DegenerateEmbeddingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad run configuration (dataset smaller than batch, unknown config keys, ...).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed data files or out-of-range labels.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace logitdp
