// Copyright 2026 The logit-dp Authors.
// SPDX-License-Identifier: Apache-2.0

#include "logitdp/training.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>

#include "logitdp/errors.hpp"
#include "logitdp/rng.hpp"
#include "logitdp/sensitivity.hpp"

namespace logitdp {

namespace {

constexpr std::uint64_t kNoiseSalt = 0x6e6f697365ULL;
constexpr std::uint64_t kSamplerSalt = 0x7368756666ULL;

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

const char* method_name(Method method) {
  switch (method) {
    case Method::kLogitDp:
      return "logit_dp";
    case Method::kNaiveDp:
      return "naive_dp";
    default:
      return "non_private";
  }
}

const char* aggregation_path_name(AggregationPath path) {
  return path == AggregationPath::kDirect ? "direct" : "lambda";
}

void TrainerConfig::validate() const {
  if (batch_size < 1) throw ConfigError("config: batch_size must be >= 1");
  if (lr <= 0.0) throw ConfigError("config: lr must be > 0");
  if (accum_steps < 1) throw ConfigError("config: accum_steps must be >= 1");
  if (method != Method::kNonPrivate) {
    if (clip_bound <= 0.0) {
      throw ConfigError("config: clip_bound must be > 0 for DP methods");
    }
    if (privacy.sigma < 0.0) throw ConfigError("config: sigma must be >= 0");
  }
  if (method == Method::kNaiveDp && naive_sensitivity_factor <= 0.0) {
    throw ConfigError("config: naive sensitivity factor must be > 0");
  }
}

void write_metrics_csv(const std::filesystem::path& path, const TrainLog& log,
                       bool include_wall) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("metrics: cannot open " + path.string());
  out << "step,examples_seen,loss,relative_loss,wall_ms\n";
  double min_loss = 0.0;
  for (const MetricsRow& r : log.rows) {
    min_loss = min_loss == 0.0 ? r.loss : std::min(min_loss, r.loss);
  }
  for (const MetricsRow& r : log.rows) {
    const double rel = min_loss != 0.0 ? r.loss / min_loss : 0.0;
    out << r.step << ',' << r.examples_seen << ',' << format_double(r.loss)
        << ',' << format_double(rel) << ','
        << format_double(include_wall ? r.wall_ms : 0.0) << '\n';
  }
  if (!out) throw DataError("metrics: write failed for " + path.string());
}

void logit_dp_step(EmbeddingModel& model, const PairBatch& batch,
                   const TrainerConfig& config, Optimizer& optimizer,
                   std::size_t step_index) {
  const std::size_t n = batch.size();
  AggregateResult agg =
      config.aggregation == AggregationPath::kDirect
          ? aggregate_direct(model, batch, config.loss, config.clip_bound)
          : aggregate_lambda(model, batch, config.loss, config.clip_bound,
                             config.accum_steps);
  if (config.privacy.sigma > 0.0) {
    double sensitivity = config.clip_bound;
    if (n >= 2) {
      sensitivity =
          combined_sensitivity(loss_constants(config.loss, n),
                               config.clip_bound, config.conservative_nl);
    }
    add_gaussian_noise(agg.grad, sensitivity, config.privacy.sigma,
                       mix_seed(config.seed, kNoiseSalt + step_index));
  }
  std::vector<double> params = model.flat_params();
  optimizer.apply(params, agg.grad, config.lr);
  model.set_flat_params(params);
}

void naive_dp_step(EmbeddingModel& model, const PairBatch& batch,
                   const TrainerConfig& config, Optimizer& optimizer,
                   std::size_t step_index) {
  std::vector<double> grad = batch_loss_grad(model, batch, config.loss);
  clip_in_place(grad, config.clip_bound);
  if (config.privacy.sigma > 0.0) {
    add_gaussian_noise(
        grad, config.naive_sensitivity_factor * config.clip_bound,
        config.privacy.sigma, mix_seed(config.seed, kNoiseSalt + step_index));
  }
  std::vector<double> params = model.flat_params();
  optimizer.apply(params, grad, config.lr);
  model.set_flat_params(params);
}

void non_private_step(EmbeddingModel& model, const PairBatch& batch,
                      const TrainerConfig& config, Optimizer& optimizer) {
  const std::vector<double> grad =
      batch_loss_grad(model, batch, config.loss);
  std::vector<double> params = model.flat_params();
  optimizer.apply(params, grad, config.lr);
  model.set_flat_params(params);
}

void train_step(EmbeddingModel& model, const PairBatch& batch,
                const TrainerConfig& config, Optimizer& optimizer,
                std::size_t step_index) {
  switch (config.method) {
    case Method::kLogitDp:
      logit_dp_step(model, batch, config, optimizer, step_index);
      break;
    case Method::kNaiveDp:
      naive_dp_step(model, batch, config, optimizer, step_index);
      break;
    case Method::kNonPrivate:
      non_private_step(model, batch, config, optimizer);
      break;
  }
}

BatchSampler::BatchSampler(std::size_t dataset_size, std::size_t batch_size,
                           std::uint64_t seed)
    : dataset_size_(dataset_size), batch_size_(batch_size), seed_(seed) {
  if (batch_size_ > dataset_size_) {
    throw ConfigError("sampler: dataset smaller than batch");
  }
  reshuffle();
}

void BatchSampler::reshuffle() {
  order_.resize(dataset_size_);
  std::iota(order_.begin(), order_.end(), std::size_t{0});
  Rng rng(mix_seed(seed_, epoch_));
  for (std::size_t i = dataset_size_; i > 1; --i) {
    std::swap(order_[i - 1], order_[rng.below(i)]);
  }
  cursor_ = 0;
}

std::vector<std::size_t> BatchSampler::next() {
  if (cursor_ + batch_size_ > dataset_size_) {
    ++epoch_;
    reshuffle();
  }
  std::vector<std::size_t> idx(order_.begin() + cursor_,
                               order_.begin() + cursor_ + batch_size_);
  cursor_ += batch_size_;
  return idx;
}

TrainLog pretrain(EmbeddingModel& model, const PairDataset& dataset,
                  const TrainerConfig& config, const EvalHook& eval_hook) {
  config.validate();
  if (dataset.size() < config.batch_size) {
    throw ConfigError("pretrain: dataset smaller than batch");
  }
  TrainLog log;
  if (config.steps == 0) return log;

  BatchSampler sampler(dataset.size(), config.batch_size,
                       mix_seed(config.seed, kSamplerSalt));
  Optimizer optimizer(config.optimizer, model.param_count());
  const auto start = std::chrono::steady_clock::now();
  for (std::size_t step = 0; step < config.steps; ++step) {
    const std::vector<std::size_t> idx = sampler.next();
    const PairBatch batch = dataset.batch(idx);
    const double loss = batch_loss(model, batch, config.loss);
    train_step(model, batch, config, optimizer, step);
    const double wall_ms =
        std::chrono::duration<double, std::milli>(
            std::chrono::steady_clock::now() - start)
            .count();
    log.rows.push_back(MetricsRow{step + 1, (step + 1) * config.batch_size,
                                  loss, wall_ms});
    if (eval_hook && config.eval_every > 0 &&
        (step + 1) % config.eval_every == 0) {
      eval_hook(step + 1, model);
    }
  }
  return log;
}

ClassifierHead ClassifierHead::init(std::size_t embed_dim,
                                    std::size_t num_classes,
                                    std::uint64_t seed,
                                    std::vector<std::size_t> hidden) {
  ModelSpec spec{embed_dim, std::move(hidden), num_classes};
  return ClassifierHead{EmbeddingModel::init(spec, seed)};
}

double cross_entropy(const Tensor& logits, std::span<const int> labels) {
  const std::size_t m = logits.rows();
  const std::size_t c = logits.cols();
  if (labels.size() != m) throw ShapeError("cross_entropy: length mismatch");
  double total = 0.0;
  for (std::size_t r = 0; r < m; ++r) {
    std::span<const double> row = logits.row(r);
    const int y = labels[r];
    if (y < 0 || static_cast<std::size_t>(y) >= c) {
      throw DataError("cross_entropy: label out of range");
    }
    const double mx = *std::max_element(row.begin(), row.end());
    double s = 0.0;
    for (double v : row) s += std::exp(v - mx);
    total += mx + std::log(s) - row[y];
  }
  return total / static_cast<double>(m);
}

std::vector<int> argmax_labels(const Tensor& logits) {
  std::vector<int> out(logits.rows());
  for (std::size_t r = 0; r < logits.rows(); ++r) {
    std::span<const double> row = logits.row(r);
    out[r] = static_cast<int>(
        std::max_element(row.begin(), row.end()) - row.begin());
  }
  return out;
}

TrainLog finetune(const EmbeddingModel& frozen_encoder, ClassifierHead& head,
                  const LabeledDataset& dataset, const FinetuneConfig& config) {
  if (config.batch_size < 1 || config.lr <= 0.0) {
    throw ConfigError("finetune: bad config");
  }
  for (int y : dataset.labels) {
    if (y < 0 || y >= dataset.num_classes) {
      throw DataError("finetune: label out of range");
    }
  }
  // The encoder is frozen, so all embeddings can be computed up front.
  const Tensor embeddings = frozen_encoder.forward(dataset.features);

  TrainLog log;
  if (config.steps == 0) return log;
  BatchSampler sampler(dataset.size(), config.batch_size,
                       mix_seed(config.seed, kSamplerSalt));
  Optimizer optimizer(config.optimizer, head.net.param_count());
  const std::size_t classes = static_cast<std::size_t>(dataset.num_classes);
  const auto start = std::chrono::steady_clock::now();
  for (std::size_t step = 0; step < config.steps; ++step) {
    const std::vector<std::size_t> idx = sampler.next();
    const std::size_t m = idx.size();
    Tensor batch_emb = Tensor::matrix(m, embeddings.cols());
    std::vector<int> batch_labels(m);
    for (std::size_t r = 0; r < m; ++r) {
      std::span<const double> src = embeddings.row(idx[r]);
      std::copy(src.begin(), src.end(), batch_emb.row(r).begin());
      batch_labels[r] = dataset.labels[idx[r]];
    }
    const ForwardCache cache = head.net.forward_cached(batch_emb);
    const Tensor& logits = cache.embeddings();
    const double loss = cross_entropy(logits, batch_labels);

    // d(mean CE)/d logits = (softmax - onehot) / m
    Tensor dlogits = Tensor::matrix(m, classes);
    for (std::size_t r = 0; r < m; ++r) {
      std::span<const double> row = logits.row(r);
      std::span<double> drow = dlogits.row(r);
      const double mx = *std::max_element(row.begin(), row.end());
      double s = 0.0;
      for (std::size_t c = 0; c < classes; ++c) {
        drow[c] = std::exp(row[c] - mx);
        s += drow[c];
      }
      for (std::size_t c = 0; c < classes; ++c) {
        drow[c] /= s * static_cast<double>(m);
      }
      drow[batch_labels[r]] -= 1.0 / static_cast<double>(m);
    }
    const std::vector<double> grad = head.net.backward(cache, dlogits);
    std::vector<double> params = head.net.flat_params();
    optimizer.apply(params, grad, config.lr);
    head.net.set_flat_params(params);

    const double wall_ms =
        std::chrono::duration<double, std::milli>(
            std::chrono::steady_clock::now() - start)
            .count();
    log.rows.push_back(MetricsRow{step + 1, (step + 1) * config.batch_size,
                                  loss, wall_ms});
  }
  return log;
}

}  // namespace logitdp
