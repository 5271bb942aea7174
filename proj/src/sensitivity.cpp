// Copyright 2026 The logit-dp Authors.
// SPDX-License-Identifier: Apache-2.0

#include "logitdp/sensitivity.hpp"

#include <cmath>

#include "logitdp/aggregation.hpp"
#include "logitdp/errors.hpp"
#include "logitdp/rng.hpp"

namespace logitdp {

double SensitivityConstants::combined_sum() const {
  return g1 + g2 + static_cast<double>(n - 1) * l;
}

double contrastive_combined_sum(std::size_t n) {
  if (n < 2) throw DomainError("contrastive constants: n must be >= 2");
  const double e2 = std::exp(2.0);
  const double nn = static_cast<double>(n);
  return 2.0 * (1.0 + (nn - 2.0) * e2 / (e2 + nn - 1.0));
}

double spreadout_combined_sum(std::size_t n) {
  if (n < 2) throw DomainError("spreadout constants: n must be >= 2");
  return 6.0;
}

SensitivityConstants contrastive_constants(std::size_t n, double b) {
  if (n < 2) throw DomainError("contrastive constants: n must be >= 2");
  // Worst case of the softmax mass p = e^2 / (e^2 + n - 1) over |z| <= 1:
  // G1 = 2(1-p), G2 = (n-1)p, L = p.
  const double e2 = std::exp(2.0);
  const double p = e2 / (e2 + static_cast<double>(n) - 1.0);
  SensitivityConstants c;
  c.g1 = 2.0 * (1.0 - p);
  c.g2 = static_cast<double>(n - 1) * p;
  c.l = p;
  c.b = b;
  c.n = n;
  c.c = c.combined_sum() * b;
  return c;
}

SensitivityConstants spreadout_constants(std::size_t n, double b) {
  if (n < 2) throw DomainError("spreadout constants: n must be >= 2");
  // |z| <= 1 under cosine similarity gives G1 = G2 = 2 and L = 2/(n-1).
  SensitivityConstants c;
  c.g1 = 2.0;
  c.g2 = 2.0;
  c.l = 2.0 / static_cast<double>(n - 1);
  c.b = b;
  c.n = n;
  c.c = c.combined_sum() * b;
  return c;
}

SensitivityConstants loss_constants(LossKind kind, std::size_t n, double b) {
  return kind == LossKind::kContrastive ? contrastive_constants(n, b)
                                        : spreadout_constants(n, b);
}

double combined_sensitivity(const SensitivityConstants& constants, double b,
                            bool conservative_nl) {
  if (b <= 0.0) throw DomainError("combined_sensitivity: B must be > 0");
  const double extra = conservative_nl ? constants.l : 0.0;
  return (constants.combined_sum() + extra) * b;
}

OracleResult empirical_sensitivity_oracle(const ModelSpec& spec, LossKind kind,
                                          std::size_t n, double b,
                                          std::size_t trials,
                                          std::uint64_t seed) {
  if (n < 2) throw DomainError("sensitivity oracle: n must be >= 2");
  if (trials < 1) throw DomainError("sensitivity oracle: trials must be >= 1");

  OracleResult result;
  const std::size_t max_skips = trials / 2 + 1;
  std::size_t attempt = 0;
  while (result.trials < trials) {
    const std::uint64_t trial_seed = mix_seed(seed, attempt++);
    const EmbeddingModel model =
        EmbeddingModel::init(spec, mix_seed(trial_seed, 0x6d6f64ULL));

    Rng rng(mix_seed(trial_seed, 0x626174ULL));
    Tensor anchors = Tensor::matrix(n, spec.input_dim);
    Tensor positives = Tensor::matrix(n, spec.input_dim);
    for (double& v : anchors.data()) v = rng.normal();
    for (double& v : positives.data()) v = rng.normal();
    const PairBatch full{anchors, positives};

    std::vector<std::size_t> head(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) head[i] = i;
    PairDataset view{std::move(anchors), std::move(positives), {}, 0};
    const PairBatch reduced = view.batch(head);

    try {
      const AggregateResult g_full = aggregate_direct(model, full, kind, b);
      // A single remaining pair has zero loss gradient for both families
      // (the spreadout sum over j != i is empty; the contrastive softmax
      // over one logit equals the indicator), so the reduced aggregate at
      // n = 2 is the zero vector.
      std::vector<double> red_grad(g_full.grad.size(), 0.0);
      if (n > 2) {
        red_grad = aggregate_direct(model, reduced, kind, b).grad;
      }
      double dist2 = 0.0;
      for (std::size_t k = 0; k < g_full.grad.size(); ++k) {
        const double diff = g_full.grad[k] - red_grad[k];
        dist2 += diff * diff;
      }
      result.max_distance = std::max(result.max_distance, std::sqrt(dist2));
      ++result.trials;
    } catch (const DegenerateEmbeddingError&) {
      if (++result.skipped >= max_skips) {
        throw DegenerateEmbeddingError(
            "sensitivity oracle: more than half of the draws were degenerate");
      }
    }
  }
  return result;
}

}  // namespace logitdp
