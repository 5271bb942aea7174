// Copyright 2026 The logit-dp Authors.
// SPDX-License-Identifier: Apache-2.0

#include "logitdp/dp.hpp"

#include <cmath>

#include "logitdp/errors.hpp"
#include "logitdp/rng.hpp"
#include "logitdp/tensor.hpp"

namespace logitdp {

const char* calibration_mode_name(CalibrationMode mode) {
  return mode == CalibrationMode::kStandard ? "standard" : "paper_footnote";
}

PrivacyParams PrivacyParams::calibrated(double epsilon, double delta,
                                        CalibrationMode mode) {
  return PrivacyParams{epsilon, delta, calibrate_sigma(epsilon, delta, mode),
                       mode};
}

void clip_in_place(std::span<double> g, double b) {
  if (b < 0.0) throw DomainError("clip: negative bound");
  // Rescale until the computed norm is at most b, so that clipping an
  // already-clipped vector is a bitwise no-op (idempotence contract). The
  // loop runs at most twice in practice; rounding can leave the first
  // rescale a few ulp above b.
  for (double norm = l2_norm(g); norm > b; norm = l2_norm(g)) {
    const double s = b / norm;
    for (double& v : g) v *= s;
  }
}

std::vector<double> clip(std::span<const double> g, double b) {
  std::vector<double> out(g.begin(), g.end());
  clip_in_place(out, b);
  return out;
}

void add_gaussian_noise(std::span<double> g, double c, double sigma,
                        std::uint64_t seed) {
  if (c < 0.0 || sigma < 0.0) throw DomainError("noise: negative scale");
  const double stddev = sigma * c;
  if (stddev == 0.0) return;
  for (std::size_t k = 0; k < g.size(); ++k) {
    g[k] += stddev * counter_normal(seed, k);
  }
}

double calibrate_sigma(double epsilon, double delta, CalibrationMode mode) {
  if (epsilon <= 0.0) throw DomainError("calibrate: epsilon must be > 0");
  if (delta <= 0.0 || delta >= 1.0) {
    throw DomainError("calibrate: delta must be in (0, 1)");
  }
  const double log_term = std::log(1.25 / delta);
  const double factor = mode == CalibrationMode::kStandard ? 2.0 : 1.0;
  return std::sqrt(factor * log_term) / epsilon;
}

double epsilon_for_sigma(double sigma, double delta, CalibrationMode mode) {
  if (sigma <= 0.0) throw DomainError("calibrate: sigma must be > 0");
  if (delta <= 0.0 || delta >= 1.0) {
    throw DomainError("calibrate: delta must be in (0, 1)");
  }
  const double log_term = std::log(1.25 / delta);
  const double factor = mode == CalibrationMode::kStandard ? 2.0 : 1.0;
  return std::sqrt(factor * log_term) / sigma;
}

}  // namespace logitdp
