// Copyright 2026 The logit-dp Authors.
// SPDX-License-Identifier: Apache-2.0

#include "logitdp/eval.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "logitdp/errors.hpp"
#include "logitdp/losses.hpp"

namespace logitdp {

const char* knn_metric_name(KnnMetric metric) {
  return metric == KnnMetric::kEuclidean ? "euclidean" : "cosine";
}

namespace {

double knn_distance(std::span<const double> a, std::span<const double> b,
                    KnnMetric metric) {
  if (metric == KnnMetric::kEuclidean) {
    double d2 = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
      const double diff = a[k] - b[k];
      d2 += diff * diff;
    }
    return std::sqrt(d2);
  }
  return 1.0 - cosine_similarity(a, b);
}

}  // namespace

std::vector<int> knn_classify(const Tensor& train_embeddings,
                              std::span<const int> train_labels,
                              const Tensor& query_embeddings, std::size_t k,
                              KnnMetric metric) {
  const std::size_t train_n = train_embeddings.rows();
  if (train_n == 0) throw DataError("knn_classify: empty train set");
  if (train_labels.size() != train_n) {
    throw ShapeError("knn_classify: label count mismatch");
  }
  if (k < 1 || k > train_n) {
    throw DomainError("knn_classify: k must be in [1, train size]");
  }
  if (query_embeddings.cols() != train_embeddings.cols()) {
    throw ShapeError("knn_classify: embedding dim mismatch");
  }

  std::vector<int> predictions(query_embeddings.rows());
  std::vector<std::pair<double, std::size_t>> dist(train_n);
  for (std::size_t q = 0; q < query_embeddings.rows(); ++q) {
    std::span<const double> query = query_embeddings.row(q);
    for (std::size_t t = 0; t < train_n; ++t) {
      dist[t] = {knn_distance(query, train_embeddings.row(t), metric), t};
    }
    // (distance, index) order makes distance ties break to the smaller index.
    std::partial_sort(dist.begin(), dist.begin() + k, dist.end());

    int max_label = 0;
    for (std::size_t j = 0; j < k; ++j) {
      max_label = std::max(max_label, train_labels[dist[j].second]);
    }
    std::vector<std::size_t> votes(static_cast<std::size_t>(max_label) + 1, 0);
    for (std::size_t j = 0; j < k; ++j) {
      const int label = train_labels[dist[j].second];
      if (label < 0) throw DataError("knn_classify: negative train label");
      ++votes[label];
    }
    std::size_t best = 0;
    for (std::size_t c = 1; c < votes.size(); ++c) {
      if (votes[c] > votes[best]) best = c;
    }
    predictions[q] = static_cast<int>(best);
  }
  return predictions;
}

EvalReport confusion_and_metrics(std::span<const int> true_labels,
                                 std::span<const int> predicted_labels,
                                 std::size_t num_classes, double beta) {
  if (true_labels.size() != predicted_labels.size()) {
    throw ShapeError("confusion_and_metrics: label length mismatch");
  }
  if (num_classes < 1) {
    throw DomainError("confusion_and_metrics: num_classes must be >= 1");
  }
  if (beta < 0.0) throw DomainError("confusion_and_metrics: beta must be >= 0");

  EvalReport report;
  report.beta = beta;
  report.confusion.assign(num_classes, std::vector<std::size_t>(num_classes));
  for (std::size_t i = 0; i < true_labels.size(); ++i) {
    const int t = true_labels[i];
    const int p = predicted_labels[i];
    if (t < 0 || static_cast<std::size_t>(t) >= num_classes || p < 0 ||
        static_cast<std::size_t>(p) >= num_classes) {
      throw DataError("confusion_and_metrics: label out of range");
    }
    ++report.confusion[t][p];
  }

  std::size_t trace = 0;
  for (std::size_t c = 0; c < num_classes; ++c) trace += report.confusion[c][c];
  report.accuracy = true_labels.empty()
                        ? 0.0
                        : static_cast<double>(trace) /
                              static_cast<double>(true_labels.size());

  const double b2 = beta * beta;
  report.precision.resize(num_classes);
  report.recall.resize(num_classes);
  report.f_beta.resize(num_classes);
  for (std::size_t c = 0; c < num_classes; ++c) {
    std::size_t row_sum = 0;
    std::size_t col_sum = 0;
    for (std::size_t j = 0; j < num_classes; ++j) {
      row_sum += report.confusion[c][j];
      col_sum += report.confusion[j][c];
    }
    const double tp = static_cast<double>(report.confusion[c][c]);
    const double p = col_sum > 0 ? tp / static_cast<double>(col_sum) : 0.0;
    const double r = row_sum > 0 ? tp / static_cast<double>(row_sum) : 0.0;
    const double denom = b2 * p + r;
    report.precision[c] = p;
    report.recall[c] = r;
    report.f_beta[c] = denom > 0.0 ? (1.0 + b2) * p * r / denom : 0.0;
    report.best_precision = std::max(report.best_precision, p);
    report.best_recall = std::max(report.best_recall, r);
    report.best_f_beta = std::max(report.best_f_beta, report.f_beta[c]);
  }
  return report;
}

std::string EvalReport::to_json() const {
  nlohmann::json j;
  j["confusion"] = confusion;
  j["accuracy"] = accuracy;
  j["precision"] = precision;
  j["recall"] = recall;
  j["f_beta"] = f_beta;
  j["best_precision"] = best_precision;
  j["best_recall"] = best_recall;
  j["best_f_beta"] = best_f_beta;
  j["beta"] = beta;
  return j.dump(2);
}

std::string EvalReport::confusion_csv() const {
  std::ostringstream out;
  for (const auto& row : confusion) {
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (j > 0) out << ',';
      out << row[j];
    }
    out << '\n';
  }
  return out.str();
}

void EvalReport::write(const std::filesystem::path& json_path) const {
  std::ofstream out(json_path, std::ios::binary);
  if (!out) throw DataError("eval: cannot open " + json_path.string());
  out << to_json() << '\n';
  if (!out) throw DataError("eval: write failed for " + json_path.string());
}

}  // namespace logitdp
