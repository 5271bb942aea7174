// Copyright 2026 The logit-dp Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <vector>

#include "logitdp/aggregation.hpp"
#include "logitdp/data.hpp"
#include "logitdp/dp.hpp"
#include "logitdp/losses.hpp"
#include "logitdp/model.hpp"
#include "logitdp/optimizer.hpp"

namespace logitdp {

enum class Method { kLogitDp, kNaiveDp, kNonPrivate };
enum class AggregationPath { kDirect, kLambda };

const char* method_name(Method method);
const char* aggregation_path_name(AggregationPath path);

struct TrainerConfig {
  Method method = Method::kNonPrivate;
  LossKind loss = LossKind::kContrastive;
  std::size_t batch_size = 64;
  std::size_t steps = 1000;
  double lr = 1e-3;
  OptimizerKind optimizer = OptimizerKind::kAdam;
  double clip_bound = 1.0;
  PrivacyParams privacy;
  AggregationPath aggregation = AggregationPath::kLambda;
  std::size_t accum_steps = 1;
  std::size_t eval_every = 0;
  std::uint64_t seed = 0;
  // Naive-DP noise scale is sigma * factor * B; factor 2 covers the stricter
  // add/remove sensitivity of the clipped batch gradient.
  double naive_sensitivity_factor = 1.0;
  // Use (G1 + G2 + n L) B instead of the theorem's (n-1) L variant.
  bool conservative_nl = false;

  void validate() const;
};

struct MetricsRow {
  std::size_t step = 0;
  std::size_t examples_seen = 0;
  double loss = 0.0;
  double wall_ms = 0.0;
};

struct TrainLog {
  std::vector<MetricsRow> rows;
};

// relative_loss = loss / min loss observed in the run. `include_wall` off
// writes zeros in the wall_ms column so the file is byte-reproducible.
void write_metrics_csv(const std::filesystem::path& path, const TrainLog& log,
                       bool include_wall = true);

// One optimization step each; the per-step noise seed is derived from
// (config.seed, step_index).
void logit_dp_step(EmbeddingModel& model, const PairBatch& batch,
                   const TrainerConfig& config, Optimizer& optimizer,
                   std::size_t step_index);
void naive_dp_step(EmbeddingModel& model, const PairBatch& batch,
                   const TrainerConfig& config, Optimizer& optimizer,
                   std::size_t step_index);
void non_private_step(EmbeddingModel& model, const PairBatch& batch,
                      const TrainerConfig& config, Optimizer& optimizer);

void train_step(EmbeddingModel& model, const PairBatch& batch,
                const TrainerConfig& config, Optimizer& optimizer,
                std::size_t step_index);

// Epoch-shuffled sampling without replacement, reshuffled per epoch.
class BatchSampler {
 public:
  BatchSampler(std::size_t dataset_size, std::size_t batch_size,
               std::uint64_t seed);
  std::vector<std::size_t> next();

 private:
  void reshuffle();

  std::size_t dataset_size_;
  std::size_t batch_size_;
  std::uint64_t seed_;
  std::size_t epoch_ = 0;
  std::size_t cursor_ = 0;
  std::vector<std::size_t> order_;
};

using EvalHook =
    std::function<void(std::size_t step, const EmbeddingModel& model)>;

// Runs config.steps training steps over the pair dataset; logs one row per
// step (loss is the batch loss before the update).
TrainLog pretrain(EmbeddingModel& model, const PairDataset& dataset,
                  const TrainerConfig& config, const EvalHook& eval_hook = {});

// Fully-connected classifier trained on frozen-encoder embeddings.
struct ClassifierHead {
  EmbeddingModel net;

  // Hidden widths default to the 64/32 head used for fine-tuning.
  static ClassifierHead init(std::size_t embed_dim, std::size_t num_classes,
                             std::uint64_t seed,
                             std::vector<std::size_t> hidden = {64, 32});
};

struct FinetuneConfig {
  std::size_t batch_size = 64;
  std::size_t steps = 500;
  double lr = 1e-2;
  OptimizerKind optimizer = OptimizerKind::kAdam;
  std::uint64_t seed = 0;
};

// Mean softmax cross-entropy of logits against integer labels.
double cross_entropy(const Tensor& logits, std::span<const int> labels);

// argmax class per row.
std::vector<int> argmax_labels(const Tensor& logits);

// Trains only the head, non-privately; the encoder is read-only.
TrainLog finetune(const EmbeddingModel& frozen_encoder, ClassifierHead& head,
                  const LabeledDataset& dataset, const FinetuneConfig& config);

}  // namespace logitdp
