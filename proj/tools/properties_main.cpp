// Copyright 2026 The logit-dp Authors.
// SPDX-License-Identifier: Apache-2.0
//
// Runs the cross-module invariant suite and prints a JSON report. Exits 2 if
// any property fails.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "logitdp/properties.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Cross-module invariant suite"};
  std::uint64_t seed = 0;
  std::string out;
  app.add_option("--seed", seed, "Suite seed");
  app.add_option("--out", out, "Optional JSON report path");
  CLI11_PARSE(app, argc, argv);

  const std::vector<logitdp::PropertyResult> results = logitdp::run_all(seed);
  const std::string report = logitdp::properties_to_json(results);
  std::cout << report << "\n";
  if (!out.empty()) {
    std::ofstream file(out, std::ios::binary);
    file << report << "\n";
    if (!file) {
      std::cerr << "cannot write " << out << "\n";
      return 3;
    }
  }
  for (const logitdp::PropertyResult& r : results) {
    if (!r.passed) {
      std::cerr << "FAILED: " << r.name << " (max violation "
                << r.max_violation << " > tolerance " << r.tolerance << ")\n";
      return 2;
    }
  }
  return 0;
}
