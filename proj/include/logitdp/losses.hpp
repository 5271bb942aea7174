// Copyright 2026 The logit-dp Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <vector>

#include "logitdp/data.hpp"
#include "logitdp/model.hpp"
#include "logitdp/tensor.hpp"

namespace logitdp {

enum class LossKind { kContrastive, kSpreadout };

const char* loss_kind_name(LossKind kind);

// Cosine similarity, clamped to [-1, 1] against rounding. Zero-norm inputs
// are rejected.
double cosine_similarity(std::span<const double> u, std::span<const double> v);

// Value plus partials with respect to both embeddings; `z` is unclamped.
// du = (v/|v| - z u/|u|) / |u| and symmetrically for dv.
void cosine_similarity_grad(std::span<const double> u,
                            std::span<const double> v, double& z,
                            std::span<double> du, std::span<double> dv);

// n x n matrix of pairwise similarities Z[i][j] = S(Phi(x_i), Phi(x_j')).
struct LogitMatrix {
  Tensor values;
  std::size_t n() const { return values.rows(); }
  double operator()(std::size_t i, std::size_t j) const {
    return values(i, j);
  }
};

LogitMatrix logit_matrix(const EmbeddingModel& model, const PairBatch& batch);

// Log-softmax loss with index i as the positive class; max-shifted.
double contrastive_value(std::size_t i, std::size_t n,
                         std::span<const double> z);
// softmax(z) with 1 subtracted at index i; entries sum to 0.
void contrastive_partials(std::size_t i, std::size_t n,
                          std::span<const double> z, std::span<double> out);

// sum_{j != i} z_j^2 / (n - 1); requires n >= 2.
double spreadout_value(std::size_t i, std::size_t n,
                       std::span<const double> z);
void spreadout_partials(std::size_t i, std::size_t n,
                        std::span<const double> z, std::span<double> out);

double loss_value(LossKind kind, std::size_t i, std::size_t n,
                  std::span<const double> z);
void loss_partials(LossKind kind, std::size_t i, std::size_t n,
                   std::span<const double> z, std::span<double> out);
std::vector<double> loss_partials(LossKind kind, std::size_t i, std::size_t n,
                                  std::span<const double> z);

// L_X(w) = sum_i loss_value(i, n, row i of the logit matrix).
double batch_loss(const EmbeddingModel& model, const PairBatch& batch,
                  LossKind kind);

// Exact gradient of batch_loss by chaining the loss partials through the
// cosine-similarity and model backprop. Deterministic accumulation order.
std::vector<double> batch_loss_grad(const EmbeddingModel& model,
                                    const PairBatch& batch, LossKind kind);

}  // namespace logitdp
