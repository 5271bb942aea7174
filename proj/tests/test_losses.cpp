// Copyright 2026 The logit-dp Authors.
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "logitdp/losses.hpp"
#include "logitdp/rng.hpp"

using namespace logitdp;

namespace {

Tensor random_matrix(std::size_t rows, std::size_t cols, Rng& rng) {
  Tensor t = Tensor::matrix(rows, cols);
  for (double& v : t.data()) v = rng.normal();
  return t;
}

std::vector<double> random_logits(std::size_t n, Rng& rng) {
  std::vector<double> z(n);
  for (double& v : z) v = 2.0 * rng.uniform01() - 1.0;
  return z;
}

}  // namespace

TEST_CASE("cosine similarity on hand-picked vectors") {
  const std::vector<double> ex{1.0, 0.0};
  const std::vector<double> ey{0.0, 2.0};
  const std::vector<double> neg{-3.0, 0.0};
  CHECK(cosine_similarity(ex, ex) == doctest::Approx(1.0));
  CHECK(cosine_similarity(ex, ey) == doctest::Approx(0.0));
  CHECK(cosine_similarity(ex, neg) == doctest::Approx(-1.0));
}

TEST_CASE("cosine similarity rejects zero-norm inputs") {
  const std::vector<double> zero{0.0, 0.0};
  const std::vector<double> u{1.0, 2.0};
  CHECK_THROWS_AS(cosine_similarity(zero, u), DegenerateEmbeddingError);
  CHECK_THROWS_AS(cosine_similarity(u, zero), DegenerateEmbeddingError);
}

TEST_CASE("cosine similarity output is clamped to [-1, 1]") {
  Rng rng(3);
  for (std::size_t trial = 0; trial < 200; ++trial) {
    std::vector<double> u(3), v(3);
    for (std::size_t k = 0; k < 3; ++k) {
      u[k] = rng.normal();
      v[k] = rng.normal();
    }
    const double z = cosine_similarity(u, v);
    CHECK(z >= -1.0);
    CHECK(z <= 1.0);
  }
}

TEST_CASE("cosine gradient matches finite differences") {
  Rng rng(5);
  const double h = 1e-6;
  for (std::size_t trial = 0; trial < 50; ++trial) {
    std::vector<double> u(4), v(4), du(4), dv(4);
    for (std::size_t k = 0; k < 4; ++k) {
      u[k] = rng.normal();
      v[k] = rng.normal();
    }
    double z = 0.0;
    cosine_similarity_grad(u, v, z, du, dv);
    for (std::size_t k = 0; k < 4; ++k) {
      const double saved = u[k];
      u[k] = saved + h;
      const double fp = dot(u, v) / (l2_norm(u) * l2_norm(v));
      u[k] = saved - h;
      const double fm = dot(u, v) / (l2_norm(u) * l2_norm(v));
      u[k] = saved;
      CHECK(du[k] == doctest::Approx((fp - fm) / (2.0 * h)).epsilon(1e-5));
    }
  }
}

TEST_CASE("contrastive value matches the direct formula on a small case") {
  // n = 2, z = (1, 0), positive index 0: log(e^1 + e^0) - 1.
  const std::vector<double> z{1.0, 0.0};
  const double expect = std::log(std::exp(1.0) + 1.0) - 1.0;
  CHECK(contrastive_value(0, 2, z) == doctest::Approx(expect).epsilon(1e-14));
}

TEST_CASE("spreadout value matches the direct formula") {
  // n = 3, i = 0: (z1^2 + z2^2) / 2.
  const std::vector<double> z{0.9, 0.5, -0.2};
  CHECK(spreadout_value(0, 3, z) ==
        doctest::Approx((0.25 + 0.04) / 2.0).epsilon(1e-14));
  CHECK_THROWS_AS(spreadout_value(0, 1, std::vector<double>{0.3}), DomainError);
}

TEST_CASE("loss partials match central finite differences of the value") {
  const double h = 1e-5;
  for (std::size_t trial = 0; trial < 200; ++trial) {
    Rng rng(mix_seed(17, trial));
    const std::size_t n = 2 + rng.below(15);
    std::vector<double> z = random_logits(n, rng);
    const std::size_t i = rng.below(n);
    for (LossKind kind : {LossKind::kContrastive, LossKind::kSpreadout}) {
      const std::vector<double> partials = loss_partials(kind, i, n, z);
      for (std::size_t j = 0; j < n; ++j) {
        const double saved = z[j];
        z[j] = saved + h;
        const double fp = loss_value(kind, i, n, z);
        z[j] = saved - h;
        const double fm = loss_value(kind, i, n, z);
        z[j] = saved;
        const double fd = (fp - fm) / (2.0 * h);
        CHECK(std::fabs(partials[j] - fd) <=
              1e-6 * std::max({1.0, std::fabs(fd), std::fabs(partials[j])}));
      }
    }
  }
}

TEST_CASE("contrastive partials sum to zero") {
  for (std::size_t trial = 0; trial < 100; ++trial) {
    Rng rng(mix_seed(19, trial));
    const std::size_t n = 2 + rng.below(15);
    const std::vector<double> z = random_logits(n, rng);
    for (std::size_t i = 0; i < n; ++i) {
      const std::vector<double> p =
          loss_partials(LossKind::kContrastive, i, n, z);
      CHECK(std::fabs(std::accumulate(p.begin(), p.end(), 0.0)) <= 1e-12);
    }
  }
}

TEST_CASE("contrastive absolute row and column sums match the softmax mass") {
  // With every row sharing one logit vector z and p = softmax(z)[n-1]:
  // the own-row absolute sum is 2(1-p) and the off-row column sum (n-1)p.
  for (std::size_t trial = 0; trial < 100; ++trial) {
    Rng rng(mix_seed(23, trial));
    const std::size_t n = 2 + rng.below(15);
    const std::vector<double> z = random_logits(n, rng);

    const double m = *std::max_element(z.begin(), z.end());
    double denom = 0.0;
    for (double v : z) denom += std::exp(v - m);
    const double p = std::exp(z[n - 1] - m) / denom;

    double row_abs = 0.0;
    for (double v : loss_partials(LossKind::kContrastive, n - 1, n, z)) {
      row_abs += std::fabs(v);
    }
    CHECK(std::fabs(row_abs - 2.0 * (1.0 - p)) <= 1e-10);

    double col_abs = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      col_abs += std::fabs(loss_partials(LossKind::kContrastive, i, n, z)[n - 1]);
    }
    CHECK(std::fabs(col_abs - static_cast<double>(n - 1) * p) <= 1e-10);
  }
}

TEST_CASE("spreadout partials are zero at the positive index") {
  Rng rng(29);
  const std::size_t n = 6;
  const std::vector<double> z = random_logits(n, rng);
  for (std::size_t i = 0; i < n; ++i) {
    const std::vector<double> p = loss_partials(LossKind::kSpreadout, i, n, z);
    CHECK(p[i] == 0.0);
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) {
        CHECK(p[j] ==
              doctest::Approx(2.0 * z[j] / static_cast<double>(n - 1)));
      }
    }
  }
}

TEST_CASE("logit matrix entries stay in range on random models") {
  for (std::size_t trial = 0; trial < 20; ++trial) {
    Rng rng(mix_seed(31, trial));
    const ModelSpec spec{4, {6}, 3};
    const EmbeddingModel model =
        EmbeddingModel::init(spec, mix_seed(32, trial));
    const PairBatch batch{random_matrix(5, 4, rng), random_matrix(5, 4, rng)};
    LogitMatrix z;
    try {
      z = logit_matrix(model, batch);
    } catch (const DegenerateEmbeddingError&) {
      continue;  // a ReLU column died; the error is the contract here
    }
    CHECK(z.n() == 5);
    for (double v : z.values.data()) {
      CHECK(v >= -1.0);
      CHECK(v <= 1.0);
    }
  }
}

TEST_CASE("batch loss gradient matches finite differences of batch loss") {
  const double h = 1e-5;
  std::size_t tested = 0;
  for (std::size_t trial = 0; trial < 50 && tested < 10; ++trial) {
    Rng rng(mix_seed(37, trial));
    const ModelSpec spec{4, {5}, 3};
    EmbeddingModel model = EmbeddingModel::init(spec, mix_seed(38, trial));
    const PairBatch batch{random_matrix(3, 4, rng), random_matrix(3, 4, rng)};
    const LossKind kind =
        trial % 2 == 0 ? LossKind::kContrastive : LossKind::kSpreadout;

    // Skip configurations near the ReLU kink or the logit clamp boundary.
    bool safe = true;
    try {
      for (const Tensor* side : {&batch.anchors, &batch.positives}) {
        const ForwardCache cache = model.forward_cached(*side);
        for (std::size_t k = 0; k + 1 < cache.preacts.size(); ++k) {
          for (double v : cache.preacts[k].data()) {
            if (std::fabs(v) <= 1e-3) safe = false;
          }
        }
      }
      const LogitMatrix lm = logit_matrix(model, batch);
      for (double v : lm.values.data()) {
        if (std::fabs(v) >= 1.0 - 1e-6) safe = false;
      }
    } catch (const DegenerateEmbeddingError&) {
      safe = false;
    }
    if (!safe) continue;
    ++tested;

    const std::vector<double> grad = batch_loss_grad(model, batch, kind);
    std::vector<double> flat = model.flat_params();
    EmbeddingModel probe = model;
    for (std::size_t k = 0; k < flat.size(); ++k) {
      const double saved = flat[k];
      flat[k] = saved + h;
      probe.set_flat_params(flat);
      const double fp = batch_loss(probe, batch, kind);
      flat[k] = saved - h;
      probe.set_flat_params(flat);
      const double fm = batch_loss(probe, batch, kind);
      flat[k] = saved;
      const double fd = (fp - fm) / (2.0 * h);
      CHECK(std::fabs(grad[k] - fd) <=
            1e-5 * std::max({1.0, std::fabs(fd), std::fabs(grad[k])}));
    }
  }
  CHECK(tested >= 5);
}
