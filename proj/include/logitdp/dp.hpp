// Copyright 2026 The logit-dp Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace logitdp {

// How (epsilon, delta) is converted to a noise multiplier:
//   kStandard:      sigma = sqrt(2 ln(1.25/delta)) / epsilon
//   kPaperFootnote: sigma = sqrt(ln(1.25/delta)) / epsilon
enum class CalibrationMode { kStandard, kPaperFootnote };

const char* calibration_mode_name(CalibrationMode mode);

struct PrivacyParams {
  double epsilon = 0.0;
  double delta = 0.0;
  double sigma = 0.0;
  CalibrationMode mode = CalibrationMode::kStandard;

  static PrivacyParams calibrated(double epsilon, double delta,
                                  CalibrationMode mode);
};

// Clip_B(x) = min{B/|x|, 1} x. The zero vector maps to itself.
void clip_in_place(std::span<double> g, double b);
std::vector<double> clip(std::span<const double> g, double b);

// Adds i.i.d. N(0, (sigma*c)^2) noise, coordinate k derived only from
// (seed, k) so the output is independent of any partitioning.
void add_gaussian_noise(std::span<double> g, double c, double sigma,
                        std::uint64_t seed);

double calibrate_sigma(double epsilon, double delta, CalibrationMode mode);

// Inverse of calibrate_sigma in the epsilon slot (calibration round-trip).
double epsilon_for_sigma(double sigma, double delta, CalibrationMode mode);

}  // namespace logitdp
