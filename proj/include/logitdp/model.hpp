// Copyright 2026 The logit-dp Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "logitdp/tensor.hpp"

namespace logitdp {

// Fully-connected embedding net: ReLU on hidden layers, identity on the final
// embedding layer.
struct ModelSpec {
  std::size_t input_dim = 0;
  std::vector<std::size_t> hidden_dims;
  std::size_t embed_dim = 0;
};

struct Layer {
  std::string name;
  Tensor weight;  // (in x out), row-major
  Tensor bias;    // (out)
};

// Ordered list of named layers with chained dimensions. Flatten order is
// layer-major, weights row-major, then bias.
class ModelParams {
 public:
  ModelParams() = default;
  explicit ModelParams(std::vector<Layer> layers);

  const std::vector<Layer>& layers() const { return layers_; }
  std::size_t num_layers() const { return layers_.size(); }
  std::size_t param_count() const { return param_count_; }

  std::vector<double> flatten() const;
  void unflatten(std::span<const double> flat);

 private:
  std::vector<Layer> layers_;
  std::size_t param_count_ = 0;
};

// Per-layer activations from one forward pass, retained for backprop.
struct ForwardCache {
  Tensor input;                  // (m x input_dim)
  std::vector<Tensor> preacts;   // preacts[k]: (m x out_k)
  std::vector<Tensor> hidden_acts;  // relu(preacts[k]) for hidden layers
  const Tensor& embeddings() const { return preacts.back(); }
};

// Scratch buffers for single-row backprop; reusable across calls.
struct RowWorkspace {
  std::vector<double> delta_a;
  std::vector<double> delta_b;
};

class EmbeddingModel {
 public:
  EmbeddingModel(ModelSpec spec, ModelParams params);

  // Hidden layers use a Kaiming-normal weight initializer, the embedding
  // layer a Xavier-normal one; biases start at zero. Deterministic per seed.
  static EmbeddingModel init(const ModelSpec& spec, std::uint64_t seed);

  const ModelSpec& spec() const { return spec_; }
  const ModelParams& params() const { return params_; }
  std::size_t param_count() const { return params_.param_count(); }
  std::size_t embed_dim() const { return spec_.embed_dim; }

  std::vector<double> flat_params() const { return params_.flatten(); }
  void set_flat_params(std::span<const double> flat) {
    params_.unflatten(flat);
  }

  Tensor forward(const Tensor& inputs) const;
  ForwardCache forward_cached(const Tensor& inputs) const;

  // Gradient of sum_r <out_grads[r], Phi(input[r])> with respect to all
  // parameters, flattened. Accumulation is layer-major, row-major.
  std::vector<double> backward(const ForwardCache& cache,
                               const Tensor& out_grads) const;

  // Adds the gradient contribution of a single row to `grad_accum` (length
  // param_count). Used by the per-pair logit-gradient hot path.
  void backward_row_accumulate(const ForwardCache& cache, std::size_t row,
                               std::span<const double> out_grad,
                               std::span<double> grad_accum,
                               RowWorkspace& ws) const;

  // Self-describing binary checkpoint; load(save(m)) == m exactly.
  void save(const std::filesystem::path& path) const;
  static EmbeddingModel load(const std::filesystem::path& path);

 private:
  ModelSpec spec_;
  ModelParams params_;
};

}  // namespace logitdp
