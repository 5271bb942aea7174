// Copyright 2026 The logit-dp Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "logitdp/tensor.hpp"

namespace logitdp {

enum class KnnMetric { kEuclidean, kCosine };

const char* knn_metric_name(KnnMetric metric);

// Majority label among the k nearest train embeddings. Distance ties break
// toward the smallest train index, vote ties toward the smallest class index.
std::vector<int> knn_classify(const Tensor& train_embeddings,
                              std::span<const int> train_labels,
                              const Tensor& query_embeddings, std::size_t k,
                              KnnMetric metric = KnnMetric::kEuclidean);

struct EvalReport {
  std::vector<std::vector<std::size_t>> confusion;  // [true][pred]
  double accuracy = 0.0;
  std::vector<double> precision;  // per class
  std::vector<double> recall;
  std::vector<double> f_beta;
  double best_precision = 0.0;
  double best_recall = 0.0;
  double best_f_beta = 0.0;
  double beta = 1.0;

  std::string to_json() const;
  std::string confusion_csv() const;
  void write(const std::filesystem::path& json_path) const;
};

// F_beta = (1 + beta^2) P R / (beta^2 P + R), with 0/0 mapping to 0.
EvalReport confusion_and_metrics(std::span<const int> true_labels,
                                 std::span<const int> predicted_labels,
                                 std::size_t num_classes, double beta = 1.0);

}  // namespace logitdp
