// Copyright 2026 The logit-dp Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace logitdp {

enum class OptimizerKind { kSgd, kAdam };

const char* optimizer_kind_name(OptimizerKind kind);

struct AdamState {
  std::vector<double> m;  // first moments
  std::vector<double> v;  // second moments
  std::size_t t = 0;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

// Bias-corrected Adam step: advances `state` and returns the parameter delta
// (to be added to the parameters).
std::vector<double> adam_update(AdamState& state, std::span<const double> g,
                                double lr);

class Optimizer {
 public:
  Optimizer(OptimizerKind kind, std::size_t param_count);

  void apply(std::span<double> params, std::span<const double> grad,
             double lr);

  OptimizerKind kind() const { return kind_; }
  const AdamState& adam_state() const { return adam_; }

 private:
  OptimizerKind kind_;
  AdamState adam_;
};

}  // namespace logitdp
