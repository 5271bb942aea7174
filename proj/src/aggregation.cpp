// Copyright 2026 The logit-dp Authors.
// SPDX-License-Identifier: Apache-2.0

#include "logitdp/aggregation.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "logitdp/errors.hpp"

namespace logitdp {

namespace {

GradAllocStats g_grad_alloc_stats;

// Embeddings, norms, and clamped logits shared by both aggregation paths.
struct PairContext {
  ForwardCache anchor_cache;
  ForwardCache positive_cache;
  std::vector<double> anchor_norms;
  std::vector<double> positive_norms;
  Tensor logits;  // clamped to [-1, 1]
  std::size_t n = 0;
  std::size_t d = 0;
};

PairContext make_context(const EmbeddingModel& model, const PairBatch& batch) {
  PairContext ctx;
  ctx.n = batch.size();
  ctx.d = model.embed_dim();
  if (ctx.n == 0) throw ShapeError("aggregate: empty batch");
  ctx.anchor_cache = model.forward_cached(batch.anchors);
  ctx.positive_cache = model.forward_cached(batch.positives);
  const Tensor& u = ctx.anchor_cache.embeddings();
  const Tensor& v = ctx.positive_cache.embeddings();
  ctx.anchor_norms.resize(ctx.n);
  ctx.positive_norms.resize(ctx.n);
  for (std::size_t i = 0; i < ctx.n; ++i) {
    ctx.anchor_norms[i] = l2_norm(u.row(i));
    ctx.positive_norms[i] = l2_norm(v.row(i));
    if (ctx.anchor_norms[i] == 0.0 || ctx.positive_norms[i] == 0.0) {
      throw DegenerateEmbeddingError(
          "aggregate: zero-norm embedding at index " + std::to_string(i));
    }
  }
  ctx.logits = Tensor::matrix(ctx.n, ctx.n);
  for (std::size_t i = 0; i < ctx.n; ++i) {
    for (std::size_t j = 0; j < ctx.n; ++j) {
      const double z = dot(u.row(i), v.row(j)) /
                       (ctx.anchor_norms[i] * ctx.positive_norms[j]);
      ctx.logits(i, j) = std::clamp(z, -1.0, 1.0);
    }
  }
  return ctx;
}

// d cos(u_i, v_j) / d u_i and / d v_j from the cached embeddings.
void cosine_pair_grads(const PairContext& ctx, std::size_t i, std::size_t j,
                       std::span<double> du, std::span<double> dv) {
  const std::span<const double> u = ctx.anchor_cache.embeddings().row(i);
  const std::span<const double> v = ctx.positive_cache.embeddings().row(j);
  const double nu = ctx.anchor_norms[i];
  const double nv = ctx.positive_norms[j];
  const double inv = 1.0 / (nu * nv);
  const double z = dot(u, v) * inv;
  for (std::size_t k = 0; k < ctx.d; ++k) {
    du[k] = v[k] * inv - z * u[k] / (nu * nu);
    dv[k] = u[k] * inv - z * v[k] / (nv * nv);
  }
}

}  // namespace

GradAllocStats& grad_alloc_stats() { return g_grad_alloc_stats; }
void reset_grad_alloc_stats() { g_grad_alloc_stats = GradAllocStats{}; }

AggregateResult aggregate_direct(const EmbeddingModel& model,
                                 const PairBatch& batch, LossKind kind,
                                 double b) {
  if (b < 0.0) throw DomainError("aggregate: negative clip bound");
  PairContext ctx = make_context(model, batch);
  const std::size_t n = ctx.n;
  const std::size_t p = model.param_count();
  reset_grad_alloc_stats();

  // Materialize the full per-pair logit-gradient set.
  std::vector<std::vector<double>> grads;
  std::vector<double> norms;
  grads.reserve(n * n);
  norms.reserve(n * n);
  std::vector<double> du(ctx.d), dv(ctx.d);
  RowWorkspace ws;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      cosine_pair_grads(ctx, i, j, du, dv);
      std::vector<double> g(p, 0.0);
      grad_alloc_stats().acquire();
      model.backward_row_accumulate(ctx.anchor_cache, i, du, g, ws);
      model.backward_row_accumulate(ctx.positive_cache, j, dv, g, ws);
      norms.push_back(l2_norm(g));
      grads.push_back(std::move(g));
    }
  }

  AggregateResult result;
  result.grad.assign(p, 0.0);
  grad_alloc_stats().acquire();
  std::vector<double> tau(n);
  for (std::size_t i = 0; i < n; ++i) {
    loss_partials(kind, i, n, ctx.logits.row(i), tau);
    for (std::size_t j = 0; j < n; ++j) {
      const std::size_t idx = i * n + j;
      const double norm = norms[idx];
      double factor = 1.0;
      if (norm > b) {
        factor = b / norm;
        ++result.diag.clipped;
      }
      const double w = tau[j] * factor;
      const std::vector<double>& g = grads[idx];
      for (std::size_t k = 0; k < p; ++k) result.grad[k] += w * g[k];
      result.diag.max_pair_norm = std::max(result.diag.max_pair_norm, norm);
    }
  }
  result.diag.pairs = n * n;
  grad_alloc_stats().release(n * n + 1);
  result.diag.peak_live_grads = grad_alloc_stats().peak;
  return result;
}

namespace {

LambdaWeights lambda_weights_from_context(const EmbeddingModel& model,
                                          const PairContext& ctx,
                                          LossKind kind, double b,
                                          std::size_t accum_chunks,
                                          AggregateDiagnostics* diag) {
  const std::size_t n = ctx.n;
  const std::size_t p = model.param_count();
  LambdaWeights lw{Tensor::matrix(n, n), Tensor::matrix(n, n)};

  std::vector<double> du(ctx.d), dv(ctx.d), tau(n);
  std::vector<double> pair_grad(p);
  grad_alloc_stats().acquire();  // the single reusable pair buffer
  RowWorkspace ws;

  accum_chunks = std::max<std::size_t>(1, std::min(accum_chunks, n));
  const std::size_t chunk = (n + accum_chunks - 1) / accum_chunks;
  for (std::size_t i0 = 0; i0 < n; i0 += chunk) {
    const std::size_t i1 = std::min(n, i0 + chunk);
    for (std::size_t i = i0; i < i1; ++i) {
      loss_partials(kind, i, n, ctx.logits.row(i), tau);
      for (std::size_t j = 0; j < n; ++j) {
        cosine_pair_grads(ctx, i, j, du, dv);
        std::fill(pair_grad.begin(), pair_grad.end(), 0.0);
        model.backward_row_accumulate(ctx.anchor_cache, i, du, pair_grad, ws);
        model.backward_row_accumulate(ctx.positive_cache, j, dv, pair_grad,
                                      ws);
        const double norm = l2_norm(pair_grad);
        double factor = 1.0;
        if (norm > b) {
          factor = b / norm;
          if (diag != nullptr) ++diag->clipped;
        }
        lw.tau(i, j) = tau[j];
        lw.lambda(i, j) = tau[j] * factor;
        if (diag != nullptr) {
          diag->max_pair_norm = std::max(diag->max_pair_norm, norm);
        }
      }
    }
  }
  grad_alloc_stats().release();
  return lw;
}

}  // namespace

LambdaWeights compute_lambda_weights(const EmbeddingModel& model,
                                     const PairBatch& batch, LossKind kind,
                                     double b) {
  if (b < 0.0) throw DomainError("aggregate: negative clip bound");
  const PairContext ctx = make_context(model, batch);
  return lambda_weights_from_context(model, ctx, kind, b, 1, nullptr);
}

AggregateResult aggregate_lambda(const EmbeddingModel& model,
                                 const PairBatch& batch, LossKind kind,
                                 double b, std::size_t accum_chunks) {
  if (b < 0.0) throw DomainError("aggregate: negative clip bound");
  PairContext ctx = make_context(model, batch);
  const std::size_t n = ctx.n;
  reset_grad_alloc_stats();

  AggregateResult result;
  result.diag.pairs = n * n;
  const LambdaWeights lw = lambda_weights_from_context(
      model, ctx, kind, b, accum_chunks, &result.diag);

  // Pass 2: one gradient of F(w) = sum_ij lambda_ij S(Phi(x_i), Phi(x_j')).
  Tensor gu = Tensor::matrix(n, ctx.d);
  Tensor gv = Tensor::matrix(n, ctx.d);
  std::vector<double> du(ctx.d), dv(ctx.d);
  for (std::size_t i = 0; i < n; ++i) {
    std::span<double> gui = gu.row(i);
    for (std::size_t j = 0; j < n; ++j) {
      cosine_pair_grads(ctx, i, j, du, dv);
      const double w = lw.lambda(i, j);
      std::span<double> gvj = gv.row(j);
      for (std::size_t k = 0; k < ctx.d; ++k) {
        gui[k] += w * du[k];
        gvj[k] += w * dv[k];
      }
    }
  }
  result.grad = model.backward(ctx.anchor_cache, gu);
  grad_alloc_stats().acquire();
  {
    const std::vector<double> grad_v =
        model.backward(ctx.positive_cache, gv);
    grad_alloc_stats().acquire();
    for (std::size_t k = 0; k < result.grad.size(); ++k) {
      result.grad[k] += grad_v[k];
    }
    grad_alloc_stats().release();
  }
  grad_alloc_stats().release();
  result.diag.peak_live_grads = grad_alloc_stats().peak;
  return result;
}

double lowrank_norm(const Tensor& u, const Tensor& v) {
  const std::size_t ur = u.rank() == 1 ? u.size() : u.rows();
  const std::size_t uc = u.rank() == 1 ? 1 : u.cols();
  const std::size_t vr = v.rank() == 1 ? v.size() : v.rows();
  const std::size_t vc = v.rank() == 1 ? 1 : v.cols();
  if (u.rank() > 2 || v.rank() > 2 || uc != vc) {
    throw ShapeError("lowrank_norm: inner dimensions do not agree");
  }
  (void)ur;
  (void)vr;
  // <U^T U, V^T V> accumulated entry by entry.
  double s = 0.0;
  for (std::size_t a = 0; a < uc; ++a) {
    for (std::size_t c = 0; c < uc; ++c) {
      double uu = 0.0;
      for (std::size_t r = 0; r < ur; ++r) {
        uu += u[r * uc + a] * u[r * uc + c];
      }
      double vv = 0.0;
      for (std::size_t r = 0; r < vr; ++r) {
        vv += v[r * vc + a] * v[r * vc + c];
      }
      s += uu * vv;
    }
  }
  return std::sqrt(std::max(0.0, s));
}

}  // namespace logitdp
