// Copyright 2026 The logit-dp Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <utility>
#include <vector>

#include "logitdp/tensor.hpp"

namespace logitdp {

// One optimization step's positive pairs. Deliberately label-free: latent
// class labels live on PairDataset and never reach the trainers.
struct PairBatch {
  Tensor anchors;    // (n x dim)
  Tensor positives;  // (n x dim)
  std::size_t size() const { return anchors.rows(); }
  std::size_t dim() const { return anchors.cols(); }
};

struct PairDataset {
  Tensor anchors;
  Tensor positives;
  std::vector<int> latent_labels;  // evaluation only
  int num_classes = 0;

  std::size_t size() const { return anchors.rows(); }
  std::size_t dim() const { return anchors.cols(); }
  PairBatch batch(std::span<const std::size_t> indices) const;
};

struct LabeledDataset {
  Tensor features;  // (N x dim)
  std::vector<int> labels;
  int num_classes = 0;

  std::size_t size() const { return labels.size(); }
  std::size_t dim() const { return features.cols(); }
};

// Gaussian clusters with centers on the unit sphere scaled by `separation`;
// positives are additive-noise copies of the anchors.
PairDataset synth_pairs(std::size_t num_clusters, std::size_t dim,
                        std::size_t points_per_cluster, double cluster_spread,
                        double augment_noise, std::uint64_t seed,
                        double separation = 4.0);

// Labeled variant of the synthetic clusters, for fine-tuning and evaluation.
LabeledDataset synth_labeled(std::size_t num_clusters, std::size_t dim,
                             std::size_t points_per_cluster,
                             double cluster_spread, std::uint64_t seed,
                             double separation = 4.0);

// Seeded shuffle split: sizes floor(f*N) / remainder, disjoint and exhaustive.
std::pair<LabeledDataset, LabeledDataset> split(const LabeledDataset& dataset,
                                                double train_fraction,
                                                std::uint64_t seed);
std::pair<PairDataset, PairDataset> split_pairs(const PairDataset& dataset,
                                                double train_fraction,
                                                std::uint64_t seed);

// CIFAR-10 binary batch format: per record one label byte (0-9) followed by
// 3072 pixel bytes (R, G, B planes of a 32x32 row-major image), scaled to
// [0, 1].
LabeledDataset read_cifar10_binary(const std::filesystem::path& path);
void write_cifar10_binary(const std::filesystem::path& path,
                          const LabeledDataset& dataset);

// Augmentation-style positive pairs from labeled examples.
PairDataset pairs_from_labeled(const LabeledDataset& dataset,
                               double augment_noise, std::uint64_t seed);

}  // namespace logitdp
