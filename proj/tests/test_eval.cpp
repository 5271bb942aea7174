// Copyright 2026 The logit-dp Authors.
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "logitdp/eval.hpp"
#include "logitdp/rng.hpp"

using namespace logitdp;

TEST_CASE("a query equal to a train point with k=1 returns its label") {
  Tensor train({3, 2}, {0.0, 0.0, 5.0, 0.0, 0.0, 5.0});
  const std::vector<int> labels{0, 1, 2};
  Tensor query({1, 2}, {5.0, 0.0});
  CHECK(knn_classify(train, labels, query, 1) == std::vector<int>{1});
}

TEST_CASE("k equal to the train size predicts the majority class") {
  Tensor train({5, 1}, {0.0, 1.0, 2.0, 3.0, 4.0});
  const std::vector<int> labels{1, 1, 1, 0, 0};
  Tensor query({2, 1}, {-10.0, 10.0});
  const std::vector<int> pred = knn_classify(train, labels, query, 5);
  CHECK(pred == std::vector<int>{1, 1});
}

TEST_CASE("well separated clusters classify held-out samples perfectly") {
  // 3 clusters of 10 points each plus held-out queries near each center.
  Rng rng(7);
  const std::vector<std::vector<double>> centers{
      {0.0, 0.0}, {20.0, 0.0}, {0.0, 20.0}};
  Tensor train = Tensor::matrix(30, 2);
  std::vector<int> labels(30);
  for (std::size_t c = 0; c < 3; ++c) {
    for (std::size_t p = 0; p < 10; ++p) {
      const std::size_t r = c * 10 + p;
      labels[r] = static_cast<int>(c);
      train(r, 0) = centers[c][0] + 0.5 * rng.normal();
      train(r, 1) = centers[c][1] + 0.5 * rng.normal();
    }
  }
  Tensor query = Tensor::matrix(9, 2);
  std::vector<int> truth(9);
  for (std::size_t c = 0; c < 3; ++c) {
    for (std::size_t p = 0; p < 3; ++p) {
      const std::size_t r = c * 3 + p;
      truth[r] = static_cast<int>(c);
      query(r, 0) = centers[c][0] + 0.5 * rng.normal();
      query(r, 1) = centers[c][1] + 0.5 * rng.normal();
    }
  }
  CHECK(knn_classify(train, labels, query, 3) == truth);
}

TEST_CASE("distance ties break toward the smaller train index") {
  // Two train points equidistant from the query; index 0 has label 1.
  Tensor train({2, 1}, {1.0, -1.0});
  const std::vector<int> labels{1, 0};
  Tensor query({1, 1}, {0.0});
  CHECK(knn_classify(train, labels, query, 1) == std::vector<int>{1});
}

TEST_CASE("vote ties break toward the smaller class index") {
  Tensor train({2, 1}, {1.0, -1.0});
  const std::vector<int> labels{2, 1};
  Tensor query({1, 1}, {0.0});
  // k = 2: one vote each for classes 1 and 2; class 1 wins.
  CHECK(knn_classify(train, labels, query, 2) == std::vector<int>{1});
}

TEST_CASE("knn preconditions") {
  Tensor train({2, 1}, {1.0, -1.0});
  const std::vector<int> labels{0, 1};
  Tensor query({1, 1}, {0.0});
  CHECK_THROWS_AS(knn_classify(train, labels, query, 0), DomainError);
  CHECK_THROWS_AS(knn_classify(train, labels, query, 3), DomainError);
  Tensor empty = Tensor::matrix(0, 1);
  CHECK_THROWS_AS(knn_classify(empty, std::vector<int>{}, query, 1), DataError);
}

TEST_CASE("cosine metric ranks by angle, not distance") {
  // Query along +x: the far collinear point beats the nearby orthogonal one.
  Tensor train({2, 2}, {100.0, 0.0, 0.0, 1.0});
  const std::vector<int> labels{0, 1};
  Tensor query({1, 2}, {1.0, 0.1});
  CHECK(knn_classify(train, labels, query, 1, KnnMetric::kEuclidean) ==
        std::vector<int>{1});
  CHECK(knn_classify(train, labels, query, 1, KnnMetric::kCosine) ==
        std::vector<int>{0});
}

TEST_CASE("perfect predictions give a diagonal confusion matrix") {
  const std::vector<int> truth{0, 0, 0, 0, 0, 1, 1, 1, 1, 1};
  const EvalReport r = confusion_and_metrics(truth, truth, 2);
  CHECK(r.confusion[0][0] == 5);
  CHECK(r.confusion[1][1] == 5);
  CHECK(r.confusion[0][1] == 0);
  CHECK(r.accuracy == 1.0);
  for (int c = 0; c < 2; ++c) {
    CHECK(r.precision[c] == 1.0);
    CHECK(r.recall[c] == 1.0);
    CHECK(r.f_beta[c] == 1.0);
  }
  CHECK(r.best_f_beta == 1.0);
}

TEST_CASE("constant predictions on balanced classes") {
  // Everything predicted class 0 across two balanced classes: accuracy 0.5,
  // class-0 recall 1 and precision 0.5, F1 = 2/3; class 1 all zeros.
  const std::vector<int> truth{0, 0, 1, 1};
  const std::vector<int> pred{0, 0, 0, 0};
  const EvalReport r = confusion_and_metrics(truth, pred, 2);
  CHECK(r.accuracy == doctest::Approx(0.5));
  CHECK(r.recall[0] == doctest::Approx(1.0));
  CHECK(r.precision[0] == doctest::Approx(0.5));
  CHECK(r.f_beta[0] == doctest::Approx(2.0 / 3.0));
  CHECK(r.precision[1] == 0.0);  // empty predicted column: 0/0 -> 0
  CHECK(r.recall[1] == 0.0);
  CHECK(r.f_beta[1] == 0.0);
  CHECK(r.best_recall == doctest::Approx(1.0));
  CHECK(r.best_f_beta == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("beta weighting recovers the textbook F formula") {
  const std::vector<int> truth{0, 0, 1, 1};
  const std::vector<int> pred{0, 0, 0, 1};
  const EvalReport r = confusion_and_metrics(truth, pred, 2, 2.0);
  // class 0: P = 2/3, R = 1. F2 = 5 P R / (4 P + R).
  const double p = 2.0 / 3.0;
  CHECK(r.f_beta[0] == doctest::Approx(5.0 * p / (4.0 * p + 1.0)));
}

TEST_CASE("the report is invariant to joint shuffling") {
  Rng rng(17);
  std::vector<int> truth(60), pred(60);
  for (std::size_t i = 0; i < 60; ++i) {
    truth[i] = static_cast<int>(rng.below(4));
    pred[i] = static_cast<int>(rng.below(4));
  }
  const EvalReport base = confusion_and_metrics(truth, pred, 4);

  std::vector<std::size_t> perm(60);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  for (std::size_t i = 60; i > 1; --i) {
    std::swap(perm[i - 1], perm[rng.below(i)]);
  }
  std::vector<int> t2(60), p2(60);
  for (std::size_t i = 0; i < 60; ++i) {
    t2[i] = truth[perm[i]];
    p2[i] = pred[perm[i]];
  }
  const EvalReport shuffled = confusion_and_metrics(t2, p2, 4);
  CHECK(shuffled.confusion == base.confusion);
  CHECK(shuffled.accuracy == base.accuracy);
  CHECK(shuffled.precision == base.precision);
  CHECK(shuffled.recall == base.recall);
  CHECK(shuffled.f_beta == base.f_beta);
}

TEST_CASE("accuracy equals trace over total") {
  Rng rng(19);
  std::vector<int> truth(37), pred(37);
  for (std::size_t i = 0; i < 37; ++i) {
    truth[i] = static_cast<int>(rng.below(3));
    pred[i] = static_cast<int>(rng.below(3));
  }
  const EvalReport r = confusion_and_metrics(truth, pred, 3);
  std::size_t trace = 0;
  std::size_t total = 0;
  for (std::size_t c = 0; c < 3; ++c) {
    trace += r.confusion[c][c];
    for (std::size_t j = 0; j < 3; ++j) total += r.confusion[c][j];
  }
  CHECK(total == 37);
  CHECK(r.accuracy == static_cast<double>(trace) / 37.0);
}

TEST_CASE("report serialization has the confusion matrix in both formats") {
  const std::vector<int> truth{0, 1};
  const std::vector<int> pred{1, 1};
  const EvalReport r = confusion_and_metrics(truth, pred, 2);
  CHECK(r.confusion_csv() == "0,1\n0,1\n");
  const std::string j = r.to_json();
  CHECK(j.find("\"accuracy\"") != std::string::npos);
  CHECK(j.find("\"confusion\"") != std::string::npos);
  CHECK(j.find("\"best_f_beta\"") != std::string::npos);
}

TEST_CASE("metric preconditions") {
  const std::vector<int> truth{0, 1};
  const std::vector<int> pred{0};
  CHECK_THROWS_AS(confusion_and_metrics(truth, pred, 2), ShapeError);
  const std::vector<int> out_of_range{0, 5};
  CHECK_THROWS_AS(confusion_and_metrics(truth, out_of_range, 2), DataError);
}
