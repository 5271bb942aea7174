// Copyright 2026 The logit-dp Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <vector>

#include "logitdp/losses.hpp"
#include "logitdp/model.hpp"

namespace logitdp {

// Counts parameter-sized gradient buffers held alive by the aggregation
// paths; lets tests pin the memory contract of the lambda path.
struct GradAllocStats {
  std::size_t live = 0;
  std::size_t peak = 0;

  void acquire(std::size_t k = 1) {
    live += k;
    if (live > peak) peak = live;
  }
  void release(std::size_t k = 1) { live -= k; }
};

GradAllocStats& grad_alloc_stats();
void reset_grad_alloc_stats();

struct AggregateDiagnostics {
  std::size_t pairs = 0;
  std::size_t clipped = 0;
  double max_pair_norm = 0.0;
  std::size_t peak_live_grads = 0;
};

struct AggregateResult {
  std::vector<double> grad;
  AggregateDiagnostics diag;
};

// tau[i][j] = d loss^(i,n) / d Z_ij at the unperturbed logits;
// lambda[i][j] = tau[i][j] * min{B/|g_ij|, 1}.
struct LambdaWeights {
  Tensor tau;
  Tensor lambda;
};

// Clipped aggregated gradient, direct path: materializes all n^2 per-pair
// logit gradients g_ij and sums tau_ij Clip_B(g_ij) in i-major order.
AggregateResult aggregate_direct(const EmbeddingModel& model,
                                 const PairBatch& batch, LossKind kind,
                                 double b);

// Memory-efficient path: pass 1 computes (tau_ij, |g_ij|) without retaining
// any g_ij, pass 2 takes one gradient of the lambda-weighted similarity sum.
// Equal to aggregate_direct up to rounding. `accum_chunks` splits the row
// sweep into micro-steps without changing the result.
AggregateResult aggregate_lambda(const EmbeddingModel& model,
                                 const PairBatch& batch, LossKind kind,
                                 double b, std::size_t accum_chunks = 1);

LambdaWeights compute_lambda_weights(const EmbeddingModel& model,
                                     const PairBatch& batch, LossKind kind,
                                     double b);

// Frobenius norm of U V^T via <U^T U, V^T V>, without materializing U V^T.
double lowrank_norm(const Tensor& u, const Tensor& v);

}  // namespace logitdp
