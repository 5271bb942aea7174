// Copyright 2026 The logit-dp Authors.
// SPDX-License-Identifier: Apache-2.0

#include "logitdp/optimizer.hpp"

#include <cmath>

#include "logitdp/errors.hpp"

namespace logitdp {

const char* optimizer_kind_name(OptimizerKind kind) {
  return kind == OptimizerKind::kSgd ? "sgd" : "adam";
}

std::vector<double> adam_update(AdamState& state, std::span<const double> g,
                                double lr) {
  if (state.m.empty()) {
    state.m.assign(g.size(), 0.0);
    state.v.assign(g.size(), 0.0);
  }
  if (state.m.size() != g.size()) {
    throw ShapeError("adam_update: gradient length mismatch");
  }
  state.t += 1;
  const double bc1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.t));
  const double bc2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.t));
  std::vector<double> delta(g.size());
  for (std::size_t k = 0; k < g.size(); ++k) {
    state.m[k] = state.beta1 * state.m[k] + (1.0 - state.beta1) * g[k];
    state.v[k] = state.beta2 * state.v[k] + (1.0 - state.beta2) * g[k] * g[k];
    const double mhat = state.m[k] / bc1;
    const double vhat = state.v[k] / bc2;
    delta[k] = -lr * mhat / (std::sqrt(vhat) + state.eps);
  }
  return delta;
}

Optimizer::Optimizer(OptimizerKind kind, std::size_t param_count)
    : kind_(kind) {
  if (kind_ == OptimizerKind::kAdam) {
    adam_.m.assign(param_count, 0.0);
    adam_.v.assign(param_count, 0.0);
  }
}

void Optimizer::apply(std::span<double> params, std::span<const double> grad,
                      double lr) {
  if (params.size() != grad.size()) {
    throw ShapeError("Optimizer::apply: length mismatch");
  }
  if (kind_ == OptimizerKind::kSgd) {
    for (std::size_t k = 0; k < params.size(); ++k) {
      params[k] -= lr * grad[k];
    }
  } else {
    const std::vector<double> delta = adam_update(adam_, grad, lr);
    for (std::size_t k = 0; k < params.size(); ++k) {
      params[k] += delta[k];
    }
  }
}

}  // namespace logitdp
