// Copyright 2026 The logit-dp Authors.
// SPDX-License-Identifier: Apache-2.0
//
// Release gate: one check per numbered criterion, selected by argv[1].
// Each run prints exactly one PASS/FAIL line and exits nonzero on failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "logitdp/aggregation.hpp"
#include "logitdp/data.hpp"
#include "logitdp/dp.hpp"
#include "logitdp/eval.hpp"
#include "logitdp/graph.hpp"
#include "logitdp/losses.hpp"
#include "logitdp/rng.hpp"
#include "logitdp/sensitivity.hpp"
#include "logitdp/training.hpp"

namespace {

using namespace logitdp;
using Clock = std::chrono::steady_clock;

struct Result {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(const char* format, ...) {
  char buf[512];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buf, sizeof(buf), format, args);
  va_end(args);
  return std::string(buf);
}

Tensor random_matrix(std::size_t rows, std::size_t cols, Rng& rng) {
  Tensor t = Tensor::matrix(rows, cols);
  for (double& v : t.data()) v = rng.normal();
  return t;
}

double rel_err(double a, double b) {
  return std::fabs(a - b) / std::max({1.0, std::fabs(a), std::fabs(b)});
}

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    m = std::max(m, std::fabs(a[k] - b[k]));
  }
  return m;
}

std::uint64_t fnv1a_hash(std::span<const double> values) {
  std::uint64_t h = 1469598103934665603ULL;
  for (double v : values) {
    std::uint64_t bits;
    static_assert(sizeof(bits) == sizeof(v));
    std::memcpy(&bits, &v, sizeof(bits));
    for (int byte = 0; byte < 8; ++byte) {
      h ^= (bits >> (8 * byte)) & 0xffULL;
      h *= 1099511628211ULL;
    }
  }
  return h;
}

struct RandomConfig {
  EmbeddingModel model;
  PairBatch batch;
};

// Draws a (weights, batch) configuration whose forward pass sits safely away
// from ReLU kinks and the cosine clamp, so finite differences are valid.
bool draw_safe_config(const ModelSpec& spec, std::size_t n, std::uint64_t seed,
                      RandomConfig& out) {
  EmbeddingModel model = EmbeddingModel::init(spec, mix_seed(seed, 1));
  Rng rng(mix_seed(seed, 2));
  PairBatch batch{random_matrix(n, spec.input_dim, rng),
                  random_matrix(n, spec.input_dim, rng)};
  try {
    for (const Tensor* side : {&batch.anchors, &batch.positives}) {
      const ForwardCache cache = model.forward_cached(*side);
      for (std::size_t k = 0; k + 1 < cache.preacts.size(); ++k) {
        for (double v : cache.preacts[k].data()) {
          if (std::fabs(v) <= 1e-3) return false;
        }
      }
      // Small embedding norms blow up the curvature of the cosine, which
      // ruins the finite-difference comparison.
      const Tensor& emb = cache.embeddings();
      for (std::size_t r = 0; r < emb.rows(); ++r) {
        if (l2_norm(emb.row(r)) < 0.1) return false;
      }
    }
    const LogitMatrix lm = logit_matrix(model, batch);
    for (double v : lm.values.data()) {
      if (std::fabs(v) >= 1.0 - 1e-6) return false;
    }
  } catch (const DegenerateEmbeddingError&) {
    return false;
  }
  out = RandomConfig{std::move(model), std::move(batch)};
  return true;
}

// Criteria 1 and 2: brute-force neighboring-batch sweep against the analytic
// bound on the clipped aggregated gradient.
Result sensitivity_sweep(LossKind kind, std::uint64_t seed_base) {
  const auto start = Clock::now();
  const ModelSpec spec{6, {16}, 8};
  const double tol = 1e-9;
  double min_margin = 1e300;
  std::size_t min_margin_n = 0;
  double min_margin_b = 0.0;
  for (std::size_t n = 2; n <= 12; ++n) {
    for (double b : {0.1, 1.0}) {
      const OracleResult r = empirical_sensitivity_oracle(
          spec, kind, n, b, 500, mix_seed(seed_base, n * 10 + (b > 0.5)));
      const double bound = combined_sensitivity(loss_constants(kind, n, b), b);
      const double margin = bound + tol - r.max_distance;
      if (margin < min_margin) {
        min_margin = margin;
        min_margin_n = n;
        min_margin_b = b;
      }
      if (margin < 0.0) {
        return Result{false,
                      fmt("bound exceeded at n=%zu B=%.1f: empirical %.12f > "
                          "analytic %.12f + 1e-9",
                          n, b, r.max_distance, bound)};
      }
    }
  }
  const double elapsed = seconds_since(start);
  if (elapsed > 300.0) {
    return Result{false, fmt("sweep took %.0fs, budget 300s", elapsed)};
  }
  return Result{
      true,
      fmt("n in 2..12, B in {0.1, 1}, 500 trials each, all within the bound "
          "+ 1e-9; tightest margin %.3e at n=%zu B=%.1f; %.0fs",
          min_margin, min_margin_n, min_margin_b, elapsed)};
}

Result criterion_1() { return sensitivity_sweep(LossKind::kContrastive, 101); }
Result criterion_2() { return sensitivity_sweep(LossKind::kSpreadout, 202); }

// Criterion 3: per-pair similarity gradients and both loss Jacobians against
// central finite differences with h = 1e-5, relative error below 1e-6.
Result criterion_3() {
  const double h = 1e-5;
  const double tol = 1e-6;
  const ModelSpec spec{4, {6}, 3};
  double worst = 0.0;
  std::size_t tested = 0;
  for (std::uint64_t attempt = 0; attempt < 2000 && tested < 100; ++attempt) {
    Rng pick(mix_seed(303, attempt));
    const std::size_t n = 2 + pick.below(4);
    RandomConfig cfg{EmbeddingModel::init(spec, 0),
                     PairBatch{Tensor::matrix(0, 0), Tensor::matrix(0, 0)}};
    if (!draw_safe_config(spec, n, mix_seed(304, attempt), cfg)) continue;
    ++tested;
    const std::size_t i = pick.below(n);
    const std::size_t j = pick.below(n);

    // Per-pair similarity gradient from the tape.
    const std::vector<double> analytic =
        scalar_grad(cfg.model, [&](Graph& g, GraphModel& gm) {
          const Graph::Id ea = gm.forward(g, g.constant(cfg.batch.anchors));
          const Graph::Id ep = gm.forward(g, g.constant(cfg.batch.positives));
          const Graph::Id ri = g.row(ea, i);
          const Graph::Id rj = g.row(ep, j);
          return g.div(g.dot(ri, rj), g.mul(g.norm(ri), g.norm(rj)));
        });
    const auto raw_similarity = [&](const EmbeddingModel& m) {
      const Tensor ea = m.forward(cfg.batch.anchors);
      const Tensor ep = m.forward(cfg.batch.positives);
      const std::span<const double> ri = ea.row(i);
      const std::span<const double> rj = ep.row(j);
      return dot(ri, rj) / (l2_norm(ri) * l2_norm(rj));
    };
    std::vector<double> flat = cfg.model.flat_params();
    EmbeddingModel probe = cfg.model;
    for (std::size_t k = 0; k < flat.size(); ++k) {
      const double saved = flat[k];
      flat[k] = saved + h;
      probe.set_flat_params(flat);
      const double fp = raw_similarity(probe);
      flat[k] = saved - h;
      probe.set_flat_params(flat);
      const double fm = raw_similarity(probe);
      flat[k] = saved;
      worst = std::max(worst, rel_err(analytic[k], (fp - fm) / (2.0 * h)));
    }
    probe.set_flat_params(flat);

    // Both loss-family Jacobians on one row of the logit matrix.
    const LogitMatrix lm = logit_matrix(cfg.model, cfg.batch);
    std::vector<double> z(lm.values.row(i).begin(), lm.values.row(i).end());
    for (LossKind kind : {LossKind::kContrastive, LossKind::kSpreadout}) {
      const std::vector<double> partials = loss_partials(kind, i, n, z);
      for (std::size_t c = 0; c < n; ++c) {
        const double saved = z[c];
        z[c] = saved + h;
        const double fp = loss_value(kind, i, n, z);
        z[c] = saved - h;
        const double fm = loss_value(kind, i, n, z);
        z[c] = saved;
        worst = std::max(worst, rel_err(partials[c], (fp - fm) / (2.0 * h)));
      }
    }
  }
  if (tested < 100) {
    return Result{false, fmt("only %zu kink-free configs in 2000 draws", tested)};
  }
  if (worst >= tol) {
    return Result{false, fmt("max relative error %.3e >= 1e-6", worst)};
  }
  return Result{true, fmt("100 configs, h=1e-5: per-pair similarity gradients "
                          "and both loss Jacobians, max relative error %.3e "
                          "< 1e-6",
                          worst)};
}

// Criterion 4: two-pass reweighted aggregation equals the direct n^2 path,
// and the low-rank Frobenius identity holds.
Result criterion_4() {
  const double tol = 1e-10;
  double worst_agg = 0.0;
  std::size_t tested = 0;
  for (std::uint64_t attempt = 0; attempt < 2000 && tested < 100; ++attempt) {
    Rng pick(mix_seed(404, attempt));
    const std::size_t n = 2 + pick.below(7);
    const double b = 0.05 + 2.0 * pick.uniform01();
    const LossKind kind =
        attempt % 2 == 0 ? LossKind::kContrastive : LossKind::kSpreadout;
    const ModelSpec spec{5, {7}, 4};
    EmbeddingModel model = EmbeddingModel::init(spec, mix_seed(405, attempt));
    Rng rng(mix_seed(406, attempt));
    PairBatch batch{random_matrix(n, 5, rng), random_matrix(n, 5, rng)};
    try {
      logit_matrix(model, batch);
    } catch (const DegenerateEmbeddingError&) {
      continue;
    }
    ++tested;
    const AggregateResult direct = aggregate_direct(model, batch, kind, b);
    const AggregateResult lambda = aggregate_lambda(model, batch, kind, b);
    worst_agg = std::max(worst_agg, max_abs_diff(direct.grad, lambda.grad));
  }
  if (tested < 100) {
    return Result{false, fmt("only %zu usable configs in 2000 draws", tested)};
  }
  if (worst_agg > tol) {
    return Result{false,
                  fmt("aggregation paths differ by %.3e > 1e-10", worst_agg)};
  }

  Rng rng(407);
  double worst_lr = 0.0;
  for (std::size_t trial = 0; trial < 100; ++trial) {
    const std::size_t m = 1 + rng.below(10);
    const std::size_t p = 1 + rng.below(10);
    const std::size_t r = 1 + rng.below(5);
    const Tensor u = random_matrix(m, r, rng);
    const Tensor v = random_matrix(p, r, rng);
    double frob2 = 0.0;
    for (std::size_t a = 0; a < m; ++a) {
      for (std::size_t c = 0; c < p; ++c) {
        const double entry = dot(u.row(a), v.row(c));
        frob2 += entry * entry;
      }
    }
    worst_lr =
        std::max(worst_lr, std::fabs(lowrank_norm(u, v) - std::sqrt(frob2)));
  }
  if (worst_lr > tol) {
    return Result{false,
                  fmt("low-rank norm identity off by %.3e > 1e-10", worst_lr)};
  }
  return Result{true,
                fmt("100 configs: reweighted vs direct aggregation max "
                    "difference %.3e; 100 factor pairs: low-rank norm "
                    "identity max error %.3e; both <= 1e-10",
                    worst_agg, worst_lr)};
}

// Criterion 5: with sigma 0 and an inactive clip bound, the private step is
// the plain step, parameter for parameter, across 100 chained updates.
Result criterion_5() {
  const double tol = 1e-10;
  const ModelSpec spec{6, {8}, 4};
  EmbeddingModel dp = EmbeddingModel::init(spec, 505);
  EmbeddingModel np = dp;

  TrainerConfig dp_cfg;
  dp_cfg.method = Method::kLogitDp;
  dp_cfg.loss = LossKind::kContrastive;
  dp_cfg.lr = 1e-3;
  dp_cfg.clip_bound = 1e9;
  dp_cfg.privacy.sigma = 0.0;
  TrainerConfig np_cfg = dp_cfg;
  np_cfg.method = Method::kNonPrivate;

  Optimizer dp_opt(OptimizerKind::kAdam, dp.param_count());
  Optimizer np_opt(OptimizerKind::kAdam, np.param_count());
  double worst = 0.0;
  std::uint64_t batch_seed = 0;
  for (std::size_t step = 0; step < 100; ++step) {
    for (;; ++batch_seed) {
      Rng rng(mix_seed(506, batch_seed));
      PairBatch batch{random_matrix(6, 6, rng), random_matrix(6, 6, rng)};
      try {
        logit_matrix(dp, batch);
      } catch (const DegenerateEmbeddingError&) {
        continue;
      }
      logit_dp_step(dp, batch, dp_cfg, dp_opt, step);
      non_private_step(np, batch, np_cfg, np_opt);
      ++batch_seed;
      break;
    }
    worst = std::max(worst, max_abs_diff(dp.flat_params(), np.flat_params()));
    if (worst > tol) {
      return Result{false, fmt("parameters diverged by %.3e > 1e-10 at step "
                               "%zu",
                               worst, step + 1)};
    }
  }
  return Result{true, fmt("sigma=0, B=1e9: 100 chained steps, max parameter "
                          "difference %.3e <= 1e-10",
                          worst)};
}

// Criterion 6: the closed-form noise multiplier and the realized noise scale.
Result criterion_6() {
  const double sigma = calibrate_sigma(5.0, 1e-5, CalibrationMode::kStandard);
  // The closed form sqrt(2 ln 125000)/5 evaluates to 0.9689610..., so the
  // sometimes-quoted 0.968980 is a misrounding; the closed form governs.
  const double expect = std::sqrt(2.0 * std::log(125000.0)) / 5.0;
  if (std::fabs(sigma - expect) > 1e-12 || std::fabs(sigma - 0.968980) > 2e-5) {
    return Result{false, fmt("sigma = %.9f, expected sqrt(2 ln 125000)/5 = "
                             "%.9f",
                             sigma, expect)};
  }
  const double c = 6.0;
  std::vector<double> draws(10000, 0.0);
  add_gaussian_noise(draws, c, sigma, 606);
  double sum = 0.0;
  for (double v : draws) sum += v;
  const double mean = sum / static_cast<double>(draws.size());
  double var = 0.0;
  for (double v : draws) var += (v - mean) * (v - mean);
  const double std_dev = std::sqrt(var / static_cast<double>(draws.size() - 1));
  const double rel = std::fabs(std_dev - sigma * c) / (sigma * c);
  if (rel > 0.03) {
    return Result{false, fmt("noise std %.6f vs sigma*C %.6f: off by %.1f%% > "
                             "3%%",
                             std_dev, sigma * c, 100.0 * rel)};
  }
  return Result{true, fmt("sigma(5, 1e-5) = %.6f = sqrt(2 ln 125000)/5 "
                          "(quoted 0.968980 within 2e-5); empirical noise "
                          "std within %.2f%% of sigma*C over 10^4 draws",
                          sigma, 100.0 * rel)};
}

constexpr std::size_t kTrendDim = 16;
constexpr std::size_t kTrendEmbed = 4;
const ModelSpec kTrendSpec{kTrendDim, {32}, kTrendEmbed};

// SGD keeps the update magnitude proportional to the gradient handed to it,
// which is what separates the methods: whole-gradient clipping caps its
// signal at B per step while the per-logit aggregate keeps its natural norm.
// Adam's per-coordinate normalization erases that asymmetry, so both DP
// methods would drift to the same loss plateau.
TrainerConfig trend_config(Method method, std::uint64_t seed) {
  TrainerConfig cfg;
  cfg.method = method;
  cfg.loss = LossKind::kSpreadout;
  cfg.batch_size = 64;
  cfg.steps = 2000;
  cfg.optimizer = OptimizerKind::kSgd;
  cfg.lr = method == Method::kNonPrivate ? 1e-3 : 3e-5;
  cfg.clip_bound = 0.5;
  cfg.seed = seed;
  if (method != Method::kNonPrivate) {
    cfg.privacy =
        PrivacyParams::calibrated(5.0, 1e-5, CalibrationMode::kStandard);
  }
  return cfg;
}

// Criterion 7: the training-loss trend on the synthetic 4-cluster task.
Result criterion_7() {
  const auto start = Clock::now();
  const PairDataset data = synth_pairs(4, kTrendDim, 128, 0.3, 0.1, 707);

  // (a) the non-private baseline at least halves its loss.
  EmbeddingModel np = EmbeddingModel::init(kTrendSpec, 708);
  const TrainLog np_log = pretrain(np, data, trend_config(Method::kNonPrivate, 709));
  const double np_ratio = np_log.rows.back().loss / np_log.rows.front().loss;
  if (!(np_ratio <= 0.5)) {
    return Result{false, fmt("non-private final/initial loss %.3f > 0.5",
                             np_ratio)};
  }

  // (b) per-logit clipping beats whole-gradient clipping at batch size 64.
  std::size_t wins = 0;
  for (std::uint64_t s = 0; s < 10; ++s) {
    EmbeddingModel ldp = EmbeddingModel::init(kTrendSpec, mix_seed(710, s));
    EmbeddingModel ndp = ldp;
    const TrainLog llog =
        pretrain(ldp, data, trend_config(Method::kLogitDp, mix_seed(711, s)));
    const TrainLog nlog =
        pretrain(ndp, data, trend_config(Method::kNaiveDp, mix_seed(711, s)));
    if (llog.rows.back().loss < nlog.rows.back().loss) ++wins;
  }
  if (wins < 8) {
    return Result{false, fmt("per-logit clipping won only %zu of 10 seeds, "
                             "need >= 8",
                             wins)};
  }

  // (c) whole-gradient clipping stays flat even at batch size 512.
  EmbeddingModel big = EmbeddingModel::init(kTrendSpec, 712);
  TrainerConfig big_cfg = trend_config(Method::kNaiveDp, 713);
  big_cfg.batch_size = 512;
  const TrainLog big_log = pretrain(big, data, big_cfg);
  const double decrease = (big_log.rows.front().loss - big_log.rows.back().loss) /
                          big_log.rows.front().loss;
  if (!(decrease < 0.10)) {
    return Result{false, fmt("whole-gradient clipping at n=512 improved "
                             "%.1f%%, expected < 10%%",
                             100.0 * decrease)};
  }
  const double elapsed = seconds_since(start);
  if (elapsed > 1200.0) {
    return Result{false, fmt("runs took %.0fs, budget 1200s", elapsed)};
  }
  return Result{true,
                fmt("non-private final/initial %.3f <= 0.5; per-logit beats "
                    "whole-gradient clipping in %zu/10 seeds; n=512 "
                    "whole-gradient change %.1f%% < 10%%; %.0fs",
                    np_ratio, wins, 100.0 * decrease, elapsed)};
}

// Criterion 8: embedding quality via 3-NN on held-out anchors.
Result criterion_8() {
  const PairDataset all = synth_pairs(4, kTrendDim, 100, 0.3, 0.1, 808);
  const auto [train, test] = split_pairs(all, 0.8, 809);

  const auto accuracy_of = [&](Method method, std::uint64_t seed) {
    EmbeddingModel model = EmbeddingModel::init(kTrendSpec, mix_seed(810, seed));
    pretrain(model, train, trend_config(method, mix_seed(811, seed)));
    const Tensor train_emb = model.forward(train.anchors);
    const Tensor test_emb = model.forward(test.anchors);
    const std::vector<int> pred =
        knn_classify(train_emb, train.latent_labels, test_emb, 3);
    const EvalReport report = confusion_and_metrics(
        test.latent_labels, pred, static_cast<std::size_t>(all.num_classes));
    return report.accuracy;
  };
  const double np_acc = accuracy_of(Method::kNonPrivate, 1);
  const double dp_acc = accuracy_of(Method::kLogitDp, 1);
  if (np_acc < 0.90) {
    return Result{false, fmt("non-private 3-NN test accuracy %.3f < 0.90",
                             np_acc)};
  }
  if (dp_acc < np_acc - 0.15) {
    return Result{false, fmt("private 3-NN accuracy %.3f more than 0.15 below "
                             "non-private %.3f",
                             dp_acc, np_acc)};
  }
  return Result{true, fmt("non-private 3-NN test accuracy %.3f >= 0.90; "
                          "private %.3f within 0.15",
                          np_acc, dp_acc)};
}

// Criterion 9: the fine-tuning head learns while the encoder stays frozen.
Result criterion_9() {
  const LabeledDataset data = synth_labeled(4, kTrendDim, 64, 0.3, 909);
  const EmbeddingModel encoder = EmbeddingModel::init(kTrendSpec, 910);
  const std::uint64_t hash_before = fnv1a_hash(encoder.flat_params());

  ClassifierHead head = ClassifierHead::init(kTrendEmbed, 4, 911);
  FinetuneConfig cfg;
  cfg.batch_size = 64;
  cfg.steps = 500;
  cfg.lr = 1e-2;
  cfg.seed = 912;
  finetune(encoder, head, data, cfg);

  const std::uint64_t hash_after = fnv1a_hash(encoder.flat_params());
  if (hash_before != hash_after) {
    return Result{false, "encoder parameter hash changed during fine-tuning"};
  }
  const Tensor logits = head.net.forward(encoder.forward(data.features));
  const std::vector<int> pred = argmax_labels(logits);
  std::size_t hits = 0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (pred[i] == data.labels[i]) ++hits;
  }
  const double acc = static_cast<double>(hits) / static_cast<double>(data.size());
  if (acc < 0.95) {
    return Result{false, fmt("head train accuracy %.3f < 0.95 after 500 steps",
                             acc)};
  }
  return Result{true, fmt("encoder hash unchanged (%016llx); head train "
                          "accuracy %.3f >= 0.95 within 500 steps",
                          static_cast<unsigned long long>(hash_after), acc)};
}

// Criterion 10: byte-level reproducibility of the metrics log and the binary
// image-batch round-trip.
Result criterion_10() {
  const auto dir = std::filesystem::temp_directory_path();
  const PairDataset data = synth_pairs(3, 8, 24, 0.3, 0.1, 1001);
  TrainerConfig cfg = trend_config(Method::kLogitDp, 1002);
  cfg.batch_size = 16;
  cfg.steps = 40;

  std::string contents[2];
  for (int run = 0; run < 2; ++run) {
    EmbeddingModel model = EmbeddingModel::init({8, {10}, 4}, 1003);
    const TrainLog log = pretrain(model, data, cfg);
    const auto path = dir / ("ldp_accept_metrics_" + std::to_string(run) + ".csv");
    write_metrics_csv(path, log, false);
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    contents[run] = ss.str();
    std::filesystem::remove(path);
  }
  if (contents[0] != contents[1] || contents[0].empty()) {
    return Result{false, "two identically-seeded runs wrote different "
                         "metrics.csv bytes"};
  }

  Rng rng(1004);
  LabeledDataset images;
  images.features = Tensor::matrix(100, 3072);
  images.labels.resize(100);
  images.num_classes = 10;
  for (std::size_t r = 0; r < 100; ++r) {
    images.labels[r] = static_cast<int>(rng.below(10));
    for (double& v : images.features.row(r)) {
      v = static_cast<double>(rng.below(256)) / 255.0;
    }
  }
  const auto bin_path = dir / "ldp_accept_cifar.bin";
  write_cifar10_binary(bin_path, images);
  const LabeledDataset back = read_cifar10_binary(bin_path);
  std::filesystem::remove(bin_path);
  if (!(back.features == images.features) || back.labels != images.labels) {
    return Result{false, "image-batch binary round-trip was not exact"};
  }
  return Result{true, "two identically-seeded runs wrote byte-identical "
                      "metrics.csv; 100-record image batch round-tripped "
                      "exactly"};
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::fprintf(stderr, "usage: acceptance <criterion 1-10>\n");
    return 2;
  }
  const int which = std::atoi(argv[1]);
  Result (*checks[])() = {criterion_1, criterion_2, criterion_3, criterion_4,
                          criterion_5, criterion_6, criterion_7, criterion_8,
                          criterion_9, criterion_10};
  if (which < 1 || which > 10) {
    std::fprintf(stderr, "usage: acceptance <criterion 1-10>\n");
    return 2;
  }
  Result r;
  try {
    r = checks[which - 1]();
  } catch (const std::exception& e) {
    r = Result{false, std::string("unexpected exception: ") + e.what()};
  }
  std::printf("%s criterion %d: %s\n", r.pass ? "PASS" : "FAIL", which,
              r.detail.c_str());
  return r.pass ? 0 : 1;
}
