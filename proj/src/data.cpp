// Copyright 2026 The logit-dp Authors.
// SPDX-License-Identifier: Apache-2.0

#include "logitdp/data.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include "logitdp/errors.hpp"
#include "logitdp/rng.hpp"

namespace logitdp {

namespace {

constexpr std::size_t kCifarPixels = 3072;
constexpr std::size_t kCifarRecord = kCifarPixels + 1;

std::vector<std::size_t> shuffled_indices(std::size_t n, std::uint64_t seed) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  Rng rng(seed);
  for (std::size_t i = n; i > 1; --i) {
    std::swap(idx[i - 1], idx[rng.below(i)]);
  }
  return idx;
}

Tensor gather_rows(const Tensor& m, std::span<const std::size_t> indices) {
  Tensor out = Tensor::matrix(indices.size(), m.cols());
  for (std::size_t r = 0; r < indices.size(); ++r) {
    std::span<const double> src = m.row(indices[r]);
    std::copy(src.begin(), src.end(), out.row(r).begin());
  }
  return out;
}

}  // namespace

PairBatch PairDataset::batch(std::span<const std::size_t> indices) const {
  return PairBatch{gather_rows(anchors, indices),
                   gather_rows(positives, indices)};
}

LabeledDataset synth_labeled(std::size_t num_clusters, std::size_t dim,
                             std::size_t points_per_cluster,
                             double cluster_spread, std::uint64_t seed,
                             double separation) {
  if (num_clusters == 0 || dim == 0 || points_per_cluster == 0) {
    throw DomainError("synth: dims must be positive");
  }
  Rng rng(mix_seed(seed, 0x73796e7468ULL));
  Tensor centers = Tensor::matrix(num_clusters, dim);
  for (std::size_t c = 0; c < num_clusters; ++c) {
    std::span<double> row = centers.row(c);
    for (double& v : row) v = rng.normal();
    const double norm = l2_norm(row);
    for (double& v : row) v = separation * v / norm;
  }
  const std::size_t n = num_clusters * points_per_cluster;
  LabeledDataset out;
  out.features = Tensor::matrix(n, dim);
  out.labels.resize(n);
  out.num_classes = static_cast<int>(num_clusters);
  for (std::size_t c = 0; c < num_clusters; ++c) {
    for (std::size_t p = 0; p < points_per_cluster; ++p) {
      const std::size_t r = c * points_per_cluster + p;
      out.labels[r] = static_cast<int>(c);
      std::span<double> row = out.features.row(r);
      std::span<const double> center = centers.row(c);
      for (std::size_t j = 0; j < dim; ++j) {
        row[j] = center[j] + cluster_spread * rng.normal();
      }
    }
  }
  return out;
}

PairDataset synth_pairs(std::size_t num_clusters, std::size_t dim,
                        std::size_t points_per_cluster, double cluster_spread,
                        double augment_noise, std::uint64_t seed,
                        double separation) {
  if (augment_noise < 0.0) throw DomainError("synth: augment_noise < 0");
  const LabeledDataset base =
      synth_labeled(num_clusters, dim, points_per_cluster, cluster_spread,
                    seed, separation);
  PairDataset pairs = pairs_from_labeled(base, augment_noise, seed);
  return pairs;
}

PairDataset pairs_from_labeled(const LabeledDataset& dataset,
                               double augment_noise, std::uint64_t seed) {
  if (augment_noise < 0.0) throw DomainError("pairs: augment_noise < 0");
  PairDataset out;
  out.anchors = dataset.features;
  out.positives = dataset.features;
  out.latent_labels = dataset.labels;
  out.num_classes = dataset.num_classes;
  if (augment_noise > 0.0) {
    Rng rng(mix_seed(seed, 0x61756773ULL));
    for (double& v : out.positives.data()) v += augment_noise * rng.normal();
  }
  return out;
}

namespace {

LabeledDataset take_rows(const LabeledDataset& d,
                         std::span<const std::size_t> idx) {
  LabeledDataset out;
  out.features = Tensor::matrix(idx.size(), d.dim());
  out.labels.resize(idx.size());
  out.num_classes = d.num_classes;
  for (std::size_t r = 0; r < idx.size(); ++r) {
    std::span<const double> src = d.features.row(idx[r]);
    std::copy(src.begin(), src.end(), out.features.row(r).begin());
    out.labels[r] = d.labels[idx[r]];
  }
  return out;
}

}  // namespace

std::pair<LabeledDataset, LabeledDataset> split(const LabeledDataset& dataset,
                                                double train_fraction,
                                                std::uint64_t seed) {
  if (train_fraction <= 0.0 || train_fraction >= 1.0) {
    throw DomainError("split: fraction must be in (0, 1)");
  }
  const std::size_t n = dataset.size();
  const std::size_t n_train =
      static_cast<std::size_t>(train_fraction * static_cast<double>(n));
  const std::vector<std::size_t> idx = shuffled_indices(n, seed);
  const std::span<const std::size_t> all(idx);
  return {take_rows(dataset, all.subspan(0, n_train)),
          take_rows(dataset, all.subspan(n_train))};
}

std::pair<PairDataset, PairDataset> split_pairs(const PairDataset& dataset,
                                                double train_fraction,
                                                std::uint64_t seed) {
  if (train_fraction <= 0.0 || train_fraction >= 1.0) {
    throw DomainError("split: fraction must be in (0, 1)");
  }
  const std::size_t n = dataset.size();
  const std::size_t n_train =
      static_cast<std::size_t>(train_fraction * static_cast<double>(n));
  const std::vector<std::size_t> idx = shuffled_indices(n, seed);
  const std::span<const std::size_t> all(idx);
  auto take = [&](std::span<const std::size_t> part) {
    PairDataset out;
    out.anchors = gather_rows(dataset.anchors, part);
    out.positives = gather_rows(dataset.positives, part);
    out.num_classes = dataset.num_classes;
    out.latent_labels.reserve(part.size());
    for (std::size_t i : part) out.latent_labels.push_back(dataset.latent_labels[i]);
    return out;
  };
  return {take(all.subspan(0, n_train)), take(all.subspan(n_train))};
}

LabeledDataset read_cifar10_binary(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cifar10: cannot open " + path.string());
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  if (bytes.empty() || bytes.size() % kCifarRecord != 0) {
    throw DataError("cifar10: file length not a multiple of 3073 bytes");
  }
  const std::size_t n = bytes.size() / kCifarRecord;
  LabeledDataset out;
  out.features = Tensor::matrix(n, kCifarPixels);
  out.labels.resize(n);
  out.num_classes = 10;
  for (std::size_t r = 0; r < n; ++r) {
    const unsigned char* rec = bytes.data() + r * kCifarRecord;
    if (rec[0] > 9) {
      throw DataError("cifar10: label out of range in record " +
                      std::to_string(r));
    }
    out.labels[r] = rec[0];
    std::span<double> row = out.features.row(r);
    for (std::size_t j = 0; j < kCifarPixels; ++j) {
      row[j] = static_cast<double>(rec[1 + j]) / 255.0;
    }
  }
  return out;
}

void write_cifar10_binary(const std::filesystem::path& path,
                          const LabeledDataset& dataset) {
  if (dataset.dim() != kCifarPixels) {
    throw DataError("cifar10: dataset dim is not 3072");
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cifar10: cannot open " + path.string());
  for (std::size_t r = 0; r < dataset.size(); ++r) {
    const int label = dataset.labels[r];
    if (label < 0 || label > 9) throw DataError("cifar10: label out of range");
    out.put(static_cast<char>(label));
    std::span<const double> row = dataset.features.row(r);
    for (double v : row) {
      const long b = std::lround(std::clamp(v, 0.0, 1.0) * 255.0);
      out.put(static_cast<char>(static_cast<unsigned char>(b)));
    }
  }
  if (!out) throw DataError("cifar10: write failed for " + path.string());
}

}  // namespace logitdp
