// Copyright 2026 The logit-dp Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>

#include "logitdp/losses.hpp"
#include "logitdp/model.hpp"

namespace logitdp {

// Constants (G1, G2, L) bounding the loss family's logit partials, the clip
// bound B, and the combined L2 sensitivity C = (G1 + G2 + (n-1) L) B of the
// clipped aggregated gradient.
struct SensitivityConstants {
  double g1 = 0.0;
  double g2 = 0.0;
  double l = 0.0;
  double b = 1.0;
  std::size_t n = 0;
  double c = 0.0;

  double combined_sum() const;  // G1 + G2 + (n-1) L
};

// Contrastive-loss constants for cosine logits; the combined sum equals
// 2 (1 + (n-2) e^2 / (e^2 + n - 1)), nondecreasing in n with supremum
// 2 (1 + e^2). Requires n >= 2.
SensitivityConstants contrastive_constants(std::size_t n, double b = 1.0);

// Spreadout-loss constants; the combined sum is 6 for every n >= 2.
SensitivityConstants spreadout_constants(std::size_t n, double b = 1.0);

SensitivityConstants loss_constants(LossKind kind, std::size_t n,
                                    double b = 1.0);

double contrastive_combined_sum(std::size_t n);
double spreadout_combined_sum(std::size_t n);

// C = (G1 + G2 + (n-1) L) B, or the conservative (G1 + G2 + n L) B variant.
double combined_sensitivity(const SensitivityConstants& constants, double b,
                            bool conservative_nl = false);

struct OracleResult {
  double max_distance = 0.0;
  std::size_t trials = 0;
  std::size_t skipped = 0;
};

// Brute-force falsification of the sensitivity bound: over `trials` random
// (weights, batch) draws, the max L2 distance between the clipped aggregated
// gradients on X and on X-minus-its-last-pair. Weights come from the standard
// initializer, inputs from unit Gaussians. Degenerate-embedding draws are
// resampled; more than 50% skips is an error.
OracleResult empirical_sensitivity_oracle(const ModelSpec& spec, LossKind kind,
                                          std::size_t n, double b,
                                          std::size_t trials,
                                          std::uint64_t seed);

}  // namespace logitdp
