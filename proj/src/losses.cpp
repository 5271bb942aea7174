// Copyright 2026 The logit-dp Authors.
// SPDX-License-Identifier: Apache-2.0

#include "logitdp/losses.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "logitdp/errors.hpp"

namespace logitdp {

const char* loss_kind_name(LossKind kind) {
  return kind == LossKind::kContrastive ? "contrastive" : "spreadout";
}

double cosine_similarity(std::span<const double> u,
                         std::span<const double> v) {
  const double nu = l2_norm(u);
  const double nv = l2_norm(v);
  if (nu == 0.0 || nv == 0.0) {
    throw DegenerateEmbeddingError("cosine similarity of zero-norm embedding");
  }
  return std::clamp(dot(u, v) / (nu * nv), -1.0, 1.0);
}

void cosine_similarity_grad(std::span<const double> u,
                            std::span<const double> v, double& z,
                            std::span<double> du, std::span<double> dv) {
  const double nu = l2_norm(u);
  const double nv = l2_norm(v);
  if (nu == 0.0 || nv == 0.0) {
    throw DegenerateEmbeddingError("cosine similarity of zero-norm embedding");
  }
  const double inv = 1.0 / (nu * nv);
  z = dot(u, v) * inv;
  for (std::size_t k = 0; k < u.size(); ++k) {
    du[k] = v[k] * inv - z * u[k] / (nu * nu);
    dv[k] = u[k] * inv - z * v[k] / (nv * nv);
  }
}

LogitMatrix logit_matrix(const EmbeddingModel& model, const PairBatch& batch) {
  const std::size_t n = batch.size();
  if (n == 0) throw ShapeError("logit_matrix: empty batch");
  const Tensor u = model.forward(batch.anchors);
  const Tensor v = model.forward(batch.positives);
  LogitMatrix z{Tensor::matrix(n, n)};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      try {
        z.values(i, j) = cosine_similarity(u.row(i), v.row(j));
      } catch (const DegenerateEmbeddingError&) {
        throw DegenerateEmbeddingError(
            "logit_matrix: zero-norm embedding at pair (" + std::to_string(i) +
            ", " + std::to_string(j) + ")");
      }
    }
  }
  return z;
}

double contrastive_value(std::size_t i, std::size_t n,
                         std::span<const double> z) {
  if (z.size() != n || i >= n) throw DomainError("contrastive: bad indices");
  const double m = *std::max_element(z.begin(), z.end());
  double s = 0.0;
  for (double v : z) s += std::exp(v - m);
  return m + std::log(s) - z[i];
}

void contrastive_partials(std::size_t i, std::size_t n,
                          std::span<const double> z, std::span<double> out) {
  if (z.size() != n || out.size() != n || i >= n) {
    throw DomainError("contrastive: bad indices");
  }
  const double m = *std::max_element(z.begin(), z.end());
  double s = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    out[j] = std::exp(z[j] - m);
    s += out[j];
  }
  for (std::size_t j = 0; j < n; ++j) out[j] /= s;
  out[i] -= 1.0;
}

double spreadout_value(std::size_t i, std::size_t n,
                       std::span<const double> z) {
  if (n < 2) throw DomainError("spreadout: undefined for n < 2");
  if (z.size() != n || i >= n) throw DomainError("spreadout: bad indices");
  double s = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    if (j != i) s += z[j] * z[j];
  }
  return s / static_cast<double>(n - 1);
}

void spreadout_partials(std::size_t i, std::size_t n,
                        std::span<const double> z, std::span<double> out) {
  if (n < 2) throw DomainError("spreadout: undefined for n < 2");
  if (z.size() != n || out.size() != n || i >= n) {
    throw DomainError("spreadout: bad indices");
  }
  for (std::size_t j = 0; j < n; ++j) {
    out[j] = j == i ? 0.0 : 2.0 * z[j] / static_cast<double>(n - 1);
  }
}

double loss_value(LossKind kind, std::size_t i, std::size_t n,
                  std::span<const double> z) {
  return kind == LossKind::kContrastive ? contrastive_value(i, n, z)
                                        : spreadout_value(i, n, z);
}

void loss_partials(LossKind kind, std::size_t i, std::size_t n,
                   std::span<const double> z, std::span<double> out) {
  if (kind == LossKind::kContrastive) {
    contrastive_partials(i, n, z, out);
  } else {
    spreadout_partials(i, n, z, out);
  }
}

std::vector<double> loss_partials(LossKind kind, std::size_t i, std::size_t n,
                                  std::span<const double> z) {
  std::vector<double> out(n);
  loss_partials(kind, i, n, z, out);
  return out;
}

double batch_loss(const EmbeddingModel& model, const PairBatch& batch,
                  LossKind kind) {
  const LogitMatrix z = logit_matrix(model, batch);
  const std::size_t n = z.n();
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    total += loss_value(kind, i, n, z.values.row(i));
  }
  return total;
}

std::vector<double> batch_loss_grad(const EmbeddingModel& model,
                                    const PairBatch& batch, LossKind kind) {
  const std::size_t n = batch.size();
  const std::size_t d = model.embed_dim();
  const ForwardCache anchor_cache = model.forward_cached(batch.anchors);
  const ForwardCache positive_cache = model.forward_cached(batch.positives);
  const Tensor& u = anchor_cache.embeddings();
  const Tensor& v = positive_cache.embeddings();

  Tensor gu = Tensor::matrix(n, d);
  Tensor gv = Tensor::matrix(n, d);
  std::vector<double> zrow(n), tau(n), du(d), dv(d);
  Tensor logits = Tensor::matrix(n, n);
  std::vector<std::vector<double>> dus(n, std::vector<double>(d));
  std::vector<std::vector<double>> dvs(n, std::vector<double>(d));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      double z = 0.0;
      cosine_similarity_grad(u.row(i), v.row(j), z, dus[j], dvs[j]);
      zrow[j] = std::clamp(z, -1.0, 1.0);
    }
    loss_partials(kind, i, n, zrow, tau);
    for (std::size_t j = 0; j < n; ++j) {
      std::span<double> gui = gu.row(i);
      std::span<double> gvj = gv.row(j);
      for (std::size_t k = 0; k < d; ++k) {
        gui[k] += tau[j] * dus[j][k];
        gvj[k] += tau[j] * dvs[j][k];
      }
    }
  }
  std::vector<double> grad = model.backward(anchor_cache, gu);
  const std::vector<double> grad_v = model.backward(positive_cache, gv);
  for (std::size_t k = 0; k < grad.size(); ++k) grad[k] += grad_v[k];
  return grad;
}

}  // namespace logitdp
