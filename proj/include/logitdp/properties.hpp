// Copyright 2026 The logit-dp Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace logitdp {

struct PropertyResult {
  std::string name;
  std::size_t trials = 0;
  double max_violation = 0.0;
  double tolerance = 0.0;
  bool passed = false;
  std::uint64_t seed = 0;
};

// Runs every cross-module invariant check; deterministic per seed. Failures
// are reported as results, never thrown. Results are ordered by name.
std::vector<PropertyResult> run_all(std::uint64_t seed);

std::string properties_to_json(const std::vector<PropertyResult>& results);

}  // namespace logitdp
