// Copyright 2026 The logit-dp Authors.
// SPDX-License-Identifier: Apache-2.0

#include "logitdp/model.hpp"

#include <cmath>
#include <cstring>
#include <fstream>

#include <json.hpp>

#include "logitdp/errors.hpp"
#include "logitdp/rng.hpp"

namespace logitdp {

namespace {

void check_layer_chain(const std::vector<Layer>& layers) {
  if (layers.empty()) throw ShapeError("ModelParams: no layers");
  for (std::size_t k = 0; k < layers.size(); ++k) {
    const Layer& l = layers[k];
    if (l.weight.rank() != 2 || l.bias.rank() != 1 ||
        l.bias.shape()[0] != l.weight.cols()) {
      throw ShapeError("ModelParams: layer '" + l.name + "' has bad shapes");
    }
    if (k > 0 && layers[k - 1].weight.cols() != l.weight.rows()) {
      throw ShapeError("ModelParams: dimensions do not chain at layer '" +
                       l.name + "'");
    }
  }
}

}  // namespace

ModelParams::ModelParams(std::vector<Layer> layers)
    : layers_(std::move(layers)) {
  check_layer_chain(layers_);
  for (const Layer& l : layers_) {
    param_count_ += l.weight.size() + l.bias.size();
  }
}

std::vector<double> ModelParams::flatten() const {
  std::vector<double> flat;
  flat.reserve(param_count_);
  for (const Layer& l : layers_) {
    flat.insert(flat.end(), l.weight.data().begin(), l.weight.data().end());
    flat.insert(flat.end(), l.bias.data().begin(), l.bias.data().end());
  }
  return flat;
}

void ModelParams::unflatten(std::span<const double> flat) {
  if (flat.size() != param_count_) {
    throw ShapeError("ModelParams::unflatten: wrong vector length");
  }
  std::size_t off = 0;
  for (Layer& l : layers_) {
    std::span<double> w = l.weight.data();
    std::copy(flat.begin() + off, flat.begin() + off + w.size(), w.begin());
    off += w.size();
    std::span<double> b = l.bias.data();
    std::copy(flat.begin() + off, flat.begin() + off + b.size(), b.begin());
    off += b.size();
  }
}

EmbeddingModel::EmbeddingModel(ModelSpec spec, ModelParams params)
    : spec_(std::move(spec)), params_(std::move(params)) {
  const std::vector<Layer>& layers = params_.layers();
  if (layers.front().weight.rows() != spec_.input_dim ||
      layers.back().weight.cols() != spec_.embed_dim ||
      layers.size() != spec_.hidden_dims.size() + 1) {
    throw ShapeError("EmbeddingModel: params do not match spec");
  }
  for (std::size_t k = 0; k < spec_.hidden_dims.size(); ++k) {
    if (layers[k].weight.cols() != spec_.hidden_dims[k]) {
      throw ShapeError("EmbeddingModel: hidden width mismatch");
    }
  }
}

EmbeddingModel EmbeddingModel::init(const ModelSpec& spec,
                                    std::uint64_t seed) {
  if (spec.input_dim == 0 || spec.embed_dim == 0) {
    throw DomainError("ModelSpec: dims must be positive");
  }
  for (std::size_t h : spec.hidden_dims) {
    if (h == 0) throw DomainError("ModelSpec: dims must be positive");
  }
  std::vector<Layer> layers;
  std::size_t in = spec.input_dim;
  const std::size_t n_layers = spec.hidden_dims.size() + 1;
  for (std::size_t k = 0; k < n_layers; ++k) {
    const bool is_embed = (k == n_layers - 1);
    const std::size_t out = is_embed ? spec.embed_dim : spec.hidden_dims[k];
    const double stddev =
        is_embed ? std::sqrt(2.0 / static_cast<double>(in + out))
                 : std::sqrt(2.0 / static_cast<double>(in));
    Rng rng(mix_seed(seed, 0x6c61796572ULL + k));
    Tensor w = Tensor::matrix(in, out);
    for (double& v : w.data()) v = stddev * rng.normal();
    layers.push_back(Layer{
        is_embed ? "embed" : "hidden" + std::to_string(k + 1), std::move(w),
        Tensor({out})});
    in = out;
  }
  return EmbeddingModel(spec, ModelParams(std::move(layers)));
}

Tensor EmbeddingModel::forward(const Tensor& inputs) const {
  return forward_cached(inputs).preacts.back();
}

ForwardCache EmbeddingModel::forward_cached(const Tensor& inputs) const {
  if (inputs.rank() != 2 || inputs.cols() != spec_.input_dim) {
    throw ShapeError("forward: input dim mismatch");
  }
  const std::size_t m = inputs.rows();
  if (m == 0) throw ShapeError("forward: empty batch");

  ForwardCache cache;
  cache.input = inputs;
  const std::vector<Layer>& layers = params_.layers();
  const Tensor* act = &cache.input;
  std::vector<double> relu_buf;
  Tensor hidden_act;
  for (std::size_t k = 0; k < layers.size(); ++k) {
    const Layer& l = layers[k];
    const std::size_t in = l.weight.rows();
    const std::size_t out = l.weight.cols();
    Tensor pre = Tensor::matrix(m, out);
    for (std::size_t r = 0; r < m; ++r) {
      std::span<const double> x = act->row(r);
      std::span<double> y = pre.row(r);
      for (std::size_t c = 0; c < out; ++c) y[c] = l.bias[c];
      for (std::size_t i = 0; i < in; ++i) {
        const double xi = x[i];
        std::span<const double> wrow = l.weight.row(i);
        for (std::size_t c = 0; c < out; ++c) y[c] += xi * wrow[c];
      }
    }
    cache.preacts.push_back(std::move(pre));
    if (k + 1 < layers.size()) {
      hidden_act = cache.preacts.back();
      for (double& v : hidden_act.data()) v = v > 0.0 ? v : 0.0;
      // store post-activation in a rotating local; next layer reads it
      cache.hidden_acts.push_back(std::move(hidden_act));
      act = &cache.hidden_acts.back();
    }
  }
  return cache;
}

std::vector<double> EmbeddingModel::backward(const ForwardCache& cache,
                                             const Tensor& out_grads) const {
  const std::vector<Layer>& layers = params_.layers();
  const std::size_t m = cache.input.rows();
  if (!out_grads.same_shape(cache.preacts.back())) {
    throw ShapeError("backward: output grad shape mismatch");
  }
  std::vector<double> flat(params_.param_count(), 0.0);

  // delta starts as the grad at the (identity) embedding layer output.
  Tensor delta = out_grads;
  std::vector<std::size_t> offsets(layers.size());
  {
    std::size_t off = 0;
    for (std::size_t k = 0; k < layers.size(); ++k) {
      offsets[k] = off;
      off += layers[k].weight.size() + layers[k].bias.size();
    }
  }

  for (std::size_t k = layers.size(); k-- > 0;) {
    const Layer& l = layers[k];
    const std::size_t in = l.weight.rows();
    const std::size_t out = l.weight.cols();
    const Tensor& act_in =
        k == 0 ? cache.input : cache.hidden_acts[k - 1];
    double* wgrad = flat.data() + offsets[k];
    double* bgrad = wgrad + l.weight.size();
    for (std::size_t r = 0; r < m; ++r) {
      std::span<const double> x = act_in.row(r);
      std::span<const double> d = delta.row(r);
      for (std::size_t i = 0; i < in; ++i) {
        const double xi = x[i];
        double* wg = wgrad + i * out;
        for (std::size_t c = 0; c < out; ++c) wg[c] += xi * d[c];
      }
      for (std::size_t c = 0; c < out; ++c) bgrad[c] += d[c];
    }
    if (k > 0) {
      // delta_prev = (delta . W^T) * relu'(pre_{k-1})
      const Tensor& pre_prev = cache.preacts[k - 1];
      Tensor delta_prev = Tensor::matrix(m, in);
      for (std::size_t r = 0; r < m; ++r) {
        std::span<const double> d = delta.row(r);
        std::span<const double> pp = pre_prev.row(r);
        std::span<double> dp = delta_prev.row(r);
        for (std::size_t i = 0; i < in; ++i) {
          if (pp[i] > 0.0) {
            std::span<const double> wrow = l.weight.row(i);
            double s = 0.0;
            for (std::size_t c = 0; c < out; ++c) s += wrow[c] * d[c];
            dp[i] = s;
          } else {
            dp[i] = 0.0;  // subgradient 0 at the kink
          }
        }
      }
      delta = std::move(delta_prev);
    }
  }
  return flat;
}

void EmbeddingModel::backward_row_accumulate(const ForwardCache& cache,
                                             std::size_t row,
                                             std::span<const double> out_grad,
                                             std::span<double> grad_accum,
                                             RowWorkspace& ws) const {
  const std::vector<Layer>& layers = params_.layers();
  if (out_grad.size() != spec_.embed_dim ||
      grad_accum.size() != params_.param_count()) {
    throw ShapeError("backward_row_accumulate: bad buffer sizes");
  }
  ws.delta_a.assign(out_grad.begin(), out_grad.end());
  std::vector<double>* delta = &ws.delta_a;
  std::vector<double>* delta_prev = &ws.delta_b;

  std::size_t off_end = params_.param_count();
  for (std::size_t k = layers.size(); k-- > 0;) {
    const Layer& l = layers[k];
    const std::size_t in = l.weight.rows();
    const std::size_t out = l.weight.cols();
    off_end -= l.weight.size() + l.bias.size();
    double* wgrad = grad_accum.data() + off_end;
    double* bgrad = wgrad + l.weight.size();
    std::span<const double> x =
        k == 0 ? cache.input.row(row) : cache.hidden_acts[k - 1].row(row);
    const double* d = delta->data();
    for (std::size_t i = 0; i < in; ++i) {
      const double xi = x[i];
      if (xi != 0.0) {
        double* wg = wgrad + i * out;
        for (std::size_t c = 0; c < out; ++c) wg[c] += xi * d[c];
      }
    }
    for (std::size_t c = 0; c < out; ++c) bgrad[c] += d[c];
    if (k > 0) {
      std::span<const double> pp = cache.preacts[k - 1].row(row);
      delta_prev->assign(in, 0.0);
      for (std::size_t i = 0; i < in; ++i) {
        if (pp[i] > 0.0) {
          std::span<const double> wrow = l.weight.row(i);
          double s = 0.0;
          for (std::size_t c = 0; c < out; ++c) s += wrow[c] * d[c];
          (*delta_prev)[i] = s;
        }
      }
      std::swap(delta, delta_prev);
    }
  }
}

namespace {
constexpr char kMagic[8] = {'L', 'D', 'P', 'M', '0', '0', '0', '1'};
}

void EmbeddingModel::save(const std::filesystem::path& path) const {
  nlohmann::json header;
  header["input_dim"] = spec_.input_dim;
  header["hidden_dims"] = spec_.hidden_dims;
  header["embed_dim"] = spec_.embed_dim;
  header["param_count"] = params_.param_count();
  nlohmann::json jlayers = nlohmann::json::array();
  for (const Layer& l : params_.layers()) {
    jlayers.push_back({{"name", l.name},
                       {"in", l.weight.rows()},
                       {"out", l.weight.cols()}});
  }
  header["layers"] = jlayers;
  const std::string hs = header.dump();

  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("checkpoint: cannot open " + path.string());
  out.write(kMagic, sizeof(kMagic));
  const std::uint64_t hlen = hs.size();
  out.write(reinterpret_cast<const char*>(&hlen), sizeof(hlen));
  out.write(hs.data(), static_cast<std::streamsize>(hs.size()));
  const std::vector<double> flat = params_.flatten();
  out.write(reinterpret_cast<const char*>(flat.data()),
            static_cast<std::streamsize>(flat.size() * sizeof(double)));
  if (!out) throw DataError("checkpoint: write failed for " + path.string());
}

EmbeddingModel EmbeddingModel::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("checkpoint: cannot open " + path.string());
  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw DataError("checkpoint: bad magic in " + path.string());
  }
  std::uint64_t hlen = 0;
  in.read(reinterpret_cast<char*>(&hlen), sizeof(hlen));
  std::string hs(hlen, '\0');
  in.read(hs.data(), static_cast<std::streamsize>(hlen));
  if (!in) throw DataError("checkpoint: truncated header");
  const nlohmann::json header = nlohmann::json::parse(hs);

  ModelSpec spec;
  spec.input_dim = header.at("input_dim").get<std::size_t>();
  spec.hidden_dims = header.at("hidden_dims").get<std::vector<std::size_t>>();
  spec.embed_dim = header.at("embed_dim").get<std::size_t>();

  std::vector<Layer> layers;
  for (const auto& jl : header.at("layers")) {
    const std::size_t lin = jl.at("in").get<std::size_t>();
    const std::size_t lout = jl.at("out").get<std::size_t>();
    layers.push_back(Layer{jl.at("name").get<std::string>(),
                           Tensor::matrix(lin, lout), Tensor({lout})});
  }
  ModelParams params(std::move(layers));
  const std::size_t count = header.at("param_count").get<std::size_t>();
  if (count != params.param_count()) {
    throw DataError("checkpoint: param count mismatch");
  }
  std::vector<double> flat(count);
  in.read(reinterpret_cast<char*>(flat.data()),
          static_cast<std::streamsize>(count * sizeof(double)));
  if (!in) throw DataError("checkpoint: truncated parameters");
  params.unflatten(flat);
  return EmbeddingModel(spec, std::move(params));
}

}  // namespace logitdp
