// Copyright 2026 The logit-dp Authors.
// SPDX-License-Identifier: Apache-2.0
//
// Command-line entry point: pretrain / finetune / evaluate /
// verify-sensitivity. Configuration comes from flags plus an optional JSON
// config file; flags override the file, unknown keys are rejected.
// Exit codes: 0 success, 1 usage/config, 2 property violation, 3 data/IO.

#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "logitdp/data.hpp"
#include "logitdp/dp.hpp"
#include "logitdp/errors.hpp"
#include "logitdp/eval.hpp"
#include "logitdp/losses.hpp"
#include "logitdp/model.hpp"
#include "logitdp/rng.hpp"
#include "logitdp/sensitivity.hpp"
#include "logitdp/training.hpp"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitViolation = 2;
constexpr int kExitData = 3;

struct DatasetOpts {
  std::size_t clusters = 4;
  std::size_t dim = 16;
  std::size_t per_cluster = 64;
  double spread = 0.3;
  double augment_noise = 0.1;
  double separation = 4.0;
  double train_fraction = 0.8;
  std::string cifar_path;  // optional; overrides the synthetic generator
};

struct ModelOpts {
  std::string hidden = "32,16";
  std::size_t embed_dim = 4;
};

struct EvalOpts {
  std::size_t k = 3;
  double beta = 1.0;
  std::string metric = "euclidean";
};

std::vector<std::size_t> parse_dims(const std::string& s) {
  std::vector<std::size_t> dims;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::size_t pos = 0;
    const unsigned long v = std::stoul(item, &pos);
    if (pos != item.size() || v == 0) {
      throw logitdp::ConfigError("bad hidden dims: " + s);
    }
    dims.push_back(v);
  }
  return dims;
}

logitdp::Method parse_method(const std::string& s) {
  if (s == "logit_dp") return logitdp::Method::kLogitDp;
  if (s == "naive_dp") return logitdp::Method::kNaiveDp;
  if (s == "non_private") return logitdp::Method::kNonPrivate;
  throw logitdp::ConfigError("unknown method: " + s);
}

logitdp::LossKind parse_loss(const std::string& s) {
  if (s == "contrastive") return logitdp::LossKind::kContrastive;
  if (s == "spreadout") return logitdp::LossKind::kSpreadout;
  throw logitdp::ConfigError("unknown loss: " + s);
}

logitdp::CalibrationMode parse_calibration(const std::string& s) {
  if (s == "standard") return logitdp::CalibrationMode::kStandard;
  if (s == "paper_footnote") return logitdp::CalibrationMode::kPaperFootnote;
  throw logitdp::ConfigError("unknown calibration: " + s);
}

logitdp::OptimizerKind parse_optimizer(const std::string& s) {
  if (s == "sgd") return logitdp::OptimizerKind::kSgd;
  if (s == "adam") return logitdp::OptimizerKind::kAdam;
  throw logitdp::ConfigError("unknown optimizer: " + s);
}

logitdp::AggregationPath parse_aggregation(const std::string& s) {
  if (s == "direct") return logitdp::AggregationPath::kDirect;
  if (s == "lambda") return logitdp::AggregationPath::kLambda;
  throw logitdp::ConfigError("unknown aggregation: " + s);
}

logitdp::KnnMetric parse_knn_metric(const std::string& s) {
  if (s == "euclidean") return logitdp::KnnMetric::kEuclidean;
  if (s == "cosine") return logitdp::KnnMetric::kCosine;
  throw logitdp::ConfigError("unknown knn metric: " + s);
}

// Expands `--config file.json` in-place into flag tokens so that the JSON
// file and the command line share one parser (and one unknown-key check).
// Tokens from the file come first; explicitly passed flags win via TakeLast.
std::vector<std::string> splice_config_file(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] != "--config") continue;
    if (i + 1 >= args.size()) {
      throw logitdp::ConfigError("--config needs a file path");
    }
    std::ifstream in(args[i + 1]);
    if (!in) throw logitdp::DataError("cannot open config " + args[i + 1]);
    json doc;
    try {
      doc = json::parse(in);
    } catch (const json::exception& e) {
      throw logitdp::ConfigError(std::string("bad config JSON: ") + e.what());
    }
    if (!doc.is_object()) throw logitdp::ConfigError("config must be object");

    std::vector<std::string> expanded;
    for (const auto& [key, value] : doc.items()) {
      std::string flag = "--" + key;
      for (char& c : flag) {
        if (c == '_') c = '-';
      }
      if (value.is_boolean()) {
        if (value.get<bool>()) expanded.push_back(flag);
        continue;
      }
      expanded.push_back(flag);
      expanded.push_back(value.is_string() ? value.get<std::string>()
                                           : value.dump());
    }
    args.erase(args.begin() + i, args.begin() + i + 2);
    args.insert(args.begin() + i, expanded.begin(), expanded.end());
    i += expanded.size();
    --i;
  }
  return args;
}

void add_dataset_flags(CLI::App* cmd, DatasetOpts& d) {
  auto* a = cmd->add_option("--clusters", d.clusters, "Synthetic cluster count");
  auto* b = cmd->add_option("--dim", d.dim, "Feature dimension");
  auto* c = cmd->add_option("--per-cluster", d.per_cluster,
                            "Points per cluster");
  auto* e = cmd->add_option("--cluster-spread", d.spread,
                            "Within-cluster stddev");
  auto* f = cmd->add_option("--augment-noise", d.augment_noise,
                            "Positive-pair noise stddev");
  auto* g = cmd->add_option("--separation", d.separation,
                            "Cluster center scale");
  auto* h = cmd->add_option("--train-fraction", d.train_fraction,
                            "Train split fraction");
  auto* i = cmd->add_option("--cifar", d.cifar_path,
                            "CIFAR-10 binary batch file (replaces synthetic)");
  for (auto* opt : {a, b, c, e, f, g, h, i}) {
    opt->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  }
}

void add_model_flags(CLI::App* cmd, ModelOpts& m) {
  cmd->add_option("--hidden-dims", m.hidden, "Comma-separated hidden widths")
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  cmd->add_option("--embed-dim", m.embed_dim, "Embedding dimension")
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
}

void add_eval_flags(CLI::App* cmd, EvalOpts& e) {
  cmd->add_option("--knn-k", e.k, "k for the k-NN evaluation")
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  cmd->add_option("--beta", e.beta, "F_beta parameter")
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  cmd->add_option("--knn-metric", e.metric, "euclidean or cosine")
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
}

logitdp::LabeledDataset load_labeled(const DatasetOpts& d,
                                     std::uint64_t seed) {
  if (!d.cifar_path.empty()) {
    return logitdp::read_cifar10_binary(d.cifar_path);
  }
  return logitdp::synth_labeled(d.clusters, d.dim, d.per_cluster, d.spread,
                                logitdp::mix_seed(seed, 0x64617461ULL),
                                d.separation);
}

logitdp::PairDataset load_pairs(const DatasetOpts& d, std::uint64_t seed) {
  if (!d.cifar_path.empty()) {
    return logitdp::pairs_from_labeled(
        logitdp::read_cifar10_binary(d.cifar_path), d.augment_noise,
        logitdp::mix_seed(seed, 0x70616972ULL));
  }
  return logitdp::synth_pairs(d.clusters, d.dim, d.per_cluster, d.spread,
                              d.augment_noise,
                              logitdp::mix_seed(seed, 0x64617461ULL),
                              d.separation);
}

// FNV-1a over the flattened parameters' bit patterns.
std::uint64_t params_hash(const logitdp::EmbeddingModel& model) {
  std::uint64_t h = 1469598103934665603ULL;
  for (double v : model.flat_params()) {
    std::uint64_t bits;
    static_assert(sizeof(bits) == sizeof(v));
    std::memcpy(&bits, &v, sizeof(bits));
    for (int shift = 0; shift < 64; shift += 8) {
      h ^= (bits >> shift) & 0xff;
      h *= 1099511628211ULL;
    }
  }
  return h;
}

void write_text(const std::filesystem::path& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw logitdp::DataError("cannot open " + path.string());
  out << body;
  if (!out) throw logitdp::DataError("write failed for " + path.string());
}

json dataset_json(const DatasetOpts& d) {
  return {{"clusters", d.clusters},       {"dim", d.dim},
          {"per_cluster", d.per_cluster}, {"cluster_spread", d.spread},
          {"augment_noise", d.augment_noise}, {"separation", d.separation},
          {"train_fraction", d.train_fraction}, {"cifar", d.cifar_path}};
}

logitdp::EvalReport knn_report(const logitdp::EmbeddingModel& model,
                               const logitdp::Tensor& train_features,
                               const std::vector<int>& train_labels,
                               const logitdp::Tensor& test_features,
                               const std::vector<int>& test_labels,
                               int num_classes, const EvalOpts& eval_opts) {
  const logitdp::Tensor train_emb = model.forward(train_features);
  const logitdp::Tensor test_emb = model.forward(test_features);
  const std::vector<int> pred = logitdp::knn_classify(
      train_emb, train_labels, test_emb, eval_opts.k,
      parse_knn_metric(eval_opts.metric));
  return logitdp::confusion_and_metrics(
      test_labels, pred, static_cast<std::size_t>(num_classes),
      eval_opts.beta);
}

struct PretrainArgs {
  std::string method = "non_private";
  std::string loss = "contrastive";
  std::string calibration = "standard";
  std::string aggregation = "lambda";
  std::string optimizer = "adam";
  std::size_t batch_size = 64;
  std::size_t steps = 1000;
  double lr = 0.0;  // 0 = method default
  double clip_bound = 1.0;
  double epsilon = 5.0;
  double delta = 1e-5;
  std::uint64_t seed = 0;
  std::size_t accum_steps = 1;
  double naive_factor = 1.0;
  bool conservative_nl = false;
  bool wall_clock = false;
  std::string out = "run";
  DatasetOpts data;
  ModelOpts model;
  EvalOpts eval;
};

int cmd_pretrain(const PretrainArgs& a) {
  logitdp::TrainerConfig cfg;
  cfg.method = parse_method(a.method);
  cfg.loss = parse_loss(a.loss);
  cfg.batch_size = a.batch_size;
  cfg.steps = a.steps;
  cfg.optimizer = parse_optimizer(a.optimizer);
  cfg.clip_bound = a.clip_bound;
  cfg.aggregation = parse_aggregation(a.aggregation);
  cfg.accum_steps = a.accum_steps;
  cfg.seed = a.seed;
  cfg.naive_sensitivity_factor = a.naive_factor;
  cfg.conservative_nl = a.conservative_nl;
  // Method defaults mirror the embedding-net experiment setup.
  cfg.lr = a.lr > 0.0
               ? a.lr
               : (cfg.method == logitdp::Method::kNonPrivate ? 1e-3 : 1e-2);
  if (cfg.method == logitdp::Method::kNonPrivate) {
    cfg.privacy = logitdp::PrivacyParams{};
  } else {
    cfg.privacy = logitdp::PrivacyParams::calibrated(
        a.epsilon, a.delta, parse_calibration(a.calibration));
  }
  cfg.validate();

  const logitdp::PairDataset all_pairs = load_pairs(a.data, a.seed);
  auto [train_pairs, test_pairs] = logitdp::split_pairs(
      all_pairs, a.data.train_fraction,
      logitdp::mix_seed(a.seed, 0x73706c69ULL));

  const std::vector<std::size_t> hidden = parse_dims(a.model.hidden);
  logitdp::ModelSpec spec{all_pairs.dim(), hidden, a.model.embed_dim};
  logitdp::EmbeddingModel model = logitdp::EmbeddingModel::init(
      spec, logitdp::mix_seed(a.seed, 0x696e6974ULL));

  const logitdp::TrainLog log = logitdp::pretrain(model, train_pairs, cfg);

  const std::filesystem::path out(a.out);
  std::filesystem::create_directories(out);
  logitdp::write_metrics_csv(out / "metrics.csv", log, a.wall_clock);
  model.save(out / "checkpoint.bin");

  const logitdp::EvalReport report = knn_report(
      model, train_pairs.anchors, train_pairs.latent_labels,
      test_pairs.anchors, test_pairs.latent_labels, all_pairs.num_classes,
      a.eval);
  report.write(out / "eval.json");
  write_text(out / "confusion.csv", report.confusion_csv());

  json manifest = {
      {"command", "pretrain"},
      {"seed", a.seed},
      {"method", logitdp::method_name(cfg.method)},
      {"loss", logitdp::loss_kind_name(cfg.loss)},
      {"batch_size", cfg.batch_size},
      {"steps", cfg.steps},
      {"lr", cfg.lr},
      {"optimizer", logitdp::optimizer_kind_name(cfg.optimizer)},
      {"clip_bound", cfg.clip_bound},
      {"epsilon", cfg.privacy.epsilon},
      {"delta", cfg.privacy.delta},
      {"sigma", cfg.privacy.sigma},
      {"calibration", logitdp::calibration_mode_name(cfg.privacy.mode)},
      {"aggregation", logitdp::aggregation_path_name(cfg.aggregation)},
      {"accum_steps", cfg.accum_steps},
      {"naive_sensitivity_factor", cfg.naive_sensitivity_factor},
      {"conservative_nl", cfg.conservative_nl},
      {"wall_clock", a.wall_clock},
      {"dataset", dataset_json(a.data)},
      {"model",
       {{"input_dim", spec.input_dim},
        {"hidden_dims", spec.hidden_dims},
        {"embed_dim", spec.embed_dim}}},
      {"eval",
       {{"knn_k", a.eval.k}, {"beta", a.eval.beta},
        {"metric", a.eval.metric}}},
      {"test_accuracy", report.accuracy},
  };
  write_text(out / "manifest.json", manifest.dump(2) + "\n");
  std::cout << "pretrain done: " << log.rows.size() << " steps, test accuracy "
            << report.accuracy << "\n";
  return kExitOk;
}

struct FinetuneArgs {
  std::string checkpoint;
  std::string optimizer = "adam";
  std::size_t batch_size = 64;
  std::size_t steps = 500;
  double lr = 1e-2;
  std::uint64_t seed = 0;
  std::string out = "finetune";
  bool wall_clock = false;
  DatasetOpts data;
};

int cmd_finetune(const FinetuneArgs& a) {
  if (!std::filesystem::exists(a.checkpoint)) {
    throw logitdp::DataError("checkpoint not found: " + a.checkpoint);
  }
  const logitdp::EmbeddingModel encoder =
      logitdp::EmbeddingModel::load(a.checkpoint);
  const std::uint64_t hash_before = params_hash(encoder);

  const logitdp::LabeledDataset all = load_labeled(a.data, a.seed);
  auto [train, test] = logitdp::split(
      all, a.data.train_fraction, logitdp::mix_seed(a.seed, 0x73706c69ULL));

  logitdp::ClassifierHead head = logitdp::ClassifierHead::init(
      encoder.embed_dim(), static_cast<std::size_t>(all.num_classes),
      logitdp::mix_seed(a.seed, 0x68656164ULL));
  logitdp::FinetuneConfig cfg;
  cfg.batch_size = a.batch_size;
  cfg.steps = a.steps;
  cfg.lr = a.lr;
  cfg.optimizer = parse_optimizer(a.optimizer);
  cfg.seed = a.seed;
  const logitdp::TrainLog log = logitdp::finetune(encoder, head, train, cfg);
  const std::uint64_t hash_after = params_hash(encoder);

  const std::filesystem::path out(a.out);
  std::filesystem::create_directories(out);
  logitdp::write_metrics_csv(out / "metrics.csv", log, a.wall_clock);
  head.net.save(out / "head.bin");

  auto accuracy_on = [&](const logitdp::LabeledDataset& d) {
    const logitdp::Tensor logits =
        head.net.forward(encoder.forward(d.features));
    const std::vector<int> pred = logitdp::argmax_labels(logits);
    std::size_t hits = 0;
    for (std::size_t i = 0; i < d.size(); ++i) {
      if (pred[i] == d.labels[i]) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(d.size());
  };
  const double train_acc = accuracy_on(train);
  const double test_acc = accuracy_on(test);

  json manifest = {
      {"command", "finetune"},
      {"seed", a.seed},
      {"checkpoint", a.checkpoint},
      {"batch_size", cfg.batch_size},
      {"steps", cfg.steps},
      {"lr", cfg.lr},
      {"optimizer", logitdp::optimizer_kind_name(cfg.optimizer)},
      {"dataset", dataset_json(a.data)},
      {"encoder_hash_before", hash_before},
      {"encoder_hash_after", hash_after},
      {"encoder_frozen", hash_before == hash_after},
      {"train_accuracy", train_acc},
      {"test_accuracy", test_acc},
  };
  write_text(out / "manifest.json", manifest.dump(2) + "\n");
  json eval = {{"train_accuracy", train_acc}, {"test_accuracy", test_acc}};
  write_text(out / "eval.json", eval.dump(2) + "\n");
  std::cout << "finetune done: train accuracy " << train_acc
            << ", test accuracy " << test_acc << "\n";
  if (hash_before != hash_after) {
    std::cerr << "encoder parameters changed during finetune\n";
    return kExitViolation;
  }
  return kExitOk;
}

struct EvaluateArgs {
  std::string checkpoint;
  std::uint64_t seed = 0;
  std::string out = "eval";
  DatasetOpts data;
  EvalOpts eval;
};

int cmd_evaluate(const EvaluateArgs& a) {
  if (!std::filesystem::exists(a.checkpoint)) {
    throw logitdp::DataError("checkpoint not found: " + a.checkpoint);
  }
  const logitdp::EmbeddingModel model =
      logitdp::EmbeddingModel::load(a.checkpoint);
  const logitdp::LabeledDataset all = load_labeled(a.data, a.seed);
  auto [train, test] = logitdp::split(
      all, a.data.train_fraction, logitdp::mix_seed(a.seed, 0x73706c69ULL));
  if (a.eval.k > train.size()) {
    throw logitdp::ConfigError("knn-k exceeds train size");
  }
  const logitdp::EvalReport report =
      knn_report(model, train.features, train.labels, test.features,
                 test.labels, all.num_classes, a.eval);

  const std::filesystem::path out(a.out);
  std::filesystem::create_directories(out);
  report.write(out / "eval.json");
  write_text(out / "confusion.csv", report.confusion_csv());
  std::cout << "evaluate done: accuracy " << report.accuracy << "\n";
  return kExitOk;
}

struct VerifyArgs {
  std::string loss = "contrastive";
  std::size_t n_min = 2;
  std::size_t n_max = 8;
  std::size_t trials = 500;
  double clip_bound = 1.0;
  std::size_t input_dim = 6;
  std::string hidden = "8";
  std::size_t embed_dim = 4;
  bool conservative_nl = false;
  std::uint64_t seed = 0;
  std::string out;
};

int cmd_verify_sensitivity(const VerifyArgs& a) {
  if (a.clip_bound <= 0.0) {
    throw logitdp::ConfigError("clip-bound must be > 0");
  }
  if (a.n_min < 2 || a.n_max < a.n_min) {
    throw logitdp::ConfigError("need 2 <= n-min <= n-max");
  }
  const logitdp::LossKind kind = parse_loss(a.loss);
  const logitdp::ModelSpec spec{a.input_dim, parse_dims(a.hidden),
                                a.embed_dim};

  bool violated = false;
  json rows = json::array();
  std::printf("%4s %14s %14s %14s %8s\n", "n", "analytic C", "empirical max",
              "margin", "trials");
  for (std::size_t n = a.n_min; n <= a.n_max; ++n) {
    const double bound = logitdp::combined_sensitivity(
        logitdp::loss_constants(kind, n), a.clip_bound, a.conservative_nl);
    const logitdp::OracleResult r = logitdp::empirical_sensitivity_oracle(
        spec, kind, n, a.clip_bound, a.trials,
        logitdp::mix_seed(a.seed, 0x76657269ULL + n));
    const double margin = bound - r.max_distance;
    if (margin < 0.0) violated = true;
    std::printf("%4zu %14.8f %14.8f %14.8f %8zu\n", n, bound, r.max_distance,
                margin, r.trials);
    rows.push_back({{"n", n},
                    {"analytic", bound},
                    {"empirical_max", r.max_distance},
                    {"margin", margin},
                    {"trials", r.trials},
                    {"skipped", r.skipped}});
  }
  if (!a.out.empty()) {
    json doc = {{"loss", a.loss},          {"clip_bound", a.clip_bound},
                {"trials", a.trials},      {"seed", a.seed},
                {"conservative_nl", a.conservative_nl}, {"rows", rows}};
    write_text(a.out, doc.dump(2) + "\n");
  }
  if (violated) {
    std::cerr << "sensitivity bound violated\n";
    return kExitViolation;
  }
  return kExitOk;
}

template <typename T>
CLI::Option* opt(CLI::App* cmd, const std::string& name, T& var,
                 const std::string& help) {
  return cmd->add_option(name, var, help)->multi_option_policy(
      CLI::MultiOptionPolicy::TakeLast);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Differentially private embedding training with per-logit "
               "gradient clipping"};
  app.require_subcommand(1);

  PretrainArgs pa;
  CLI::App* pretrain = app.add_subcommand("pretrain", "Train an embedding net");
  opt(pretrain, "--method", pa.method, "logit_dp, naive_dp, or non_private");
  opt(pretrain, "--loss", pa.loss, "contrastive or spreadout");
  opt(pretrain, "--batch-size", pa.batch_size, "Pairs per step");
  opt(pretrain, "--steps", pa.steps, "Training steps");
  opt(pretrain, "--lr", pa.lr, "Learning rate (0 = method default)");
  opt(pretrain, "--clip-bound", pa.clip_bound, "Per-logit-gradient clip B");
  opt(pretrain, "--epsilon", pa.epsilon, "Privacy epsilon");
  opt(pretrain, "--delta", pa.delta, "Privacy delta");
  opt(pretrain, "--calibration", pa.calibration,
      "standard or paper_footnote");
  opt(pretrain, "--aggregation", pa.aggregation, "direct or lambda");
  opt(pretrain, "--optimizer", pa.optimizer, "sgd or adam");
  opt(pretrain, "--seed", pa.seed, "Run seed");
  opt(pretrain, "--accum-steps", pa.accum_steps, "Micro-accumulation chunks");
  opt(pretrain, "--naive-factor", pa.naive_factor,
      "Naive-DP sensitivity factor (1 or 2)");
  pretrain->add_flag("--conservative-nl", pa.conservative_nl,
                     "Use (G1+G2+nL)B instead of (G1+G2+(n-1)L)B");
  pretrain->add_flag("--wall-clock", pa.wall_clock,
                     "Record wall times in metrics.csv (breaks byte "
                     "reproducibility)");
  opt(pretrain, "--out", pa.out, "Output directory");
  add_dataset_flags(pretrain, pa.data);
  add_model_flags(pretrain, pa.model);
  add_eval_flags(pretrain, pa.eval);

  FinetuneArgs fa;
  CLI::App* finetune =
      app.add_subcommand("finetune", "Train a head on a frozen encoder");
  opt(finetune, "--checkpoint", fa.checkpoint, "Encoder checkpoint")
      ->required();
  opt(finetune, "--batch-size", fa.batch_size, "Examples per step");
  opt(finetune, "--steps", fa.steps, "Training steps");
  opt(finetune, "--lr", fa.lr, "Learning rate");
  opt(finetune, "--optimizer", fa.optimizer, "sgd or adam");
  opt(finetune, "--seed", fa.seed, "Run seed");
  opt(finetune, "--out", fa.out, "Output directory");
  finetune->add_flag("--wall-clock", fa.wall_clock,
                     "Record wall times in metrics.csv");
  add_dataset_flags(finetune, fa.data);

  EvaluateArgs ea;
  CLI::App* evaluate =
      app.add_subcommand("evaluate", "k-NN evaluation of a checkpoint");
  opt(evaluate, "--checkpoint", ea.checkpoint, "Encoder checkpoint")
      ->required();
  opt(evaluate, "--seed", ea.seed, "Dataset seed");
  opt(evaluate, "--out", ea.out, "Output directory");
  add_dataset_flags(evaluate, ea.data);
  add_eval_flags(evaluate, ea.eval);

  VerifyArgs va;
  CLI::App* verify = app.add_subcommand(
      "verify-sensitivity", "Analytic vs empirical sensitivity sweep");
  opt(verify, "--loss", va.loss, "contrastive or spreadout");
  opt(verify, "--n-min", va.n_min, "Smallest batch size");
  opt(verify, "--n-max", va.n_max, "Largest batch size");
  opt(verify, "--trials", va.trials, "Random trials per n");
  opt(verify, "--clip-bound", va.clip_bound, "Clip bound B");
  opt(verify, "--input-dim", va.input_dim, "Probe model input dim");
  opt(verify, "--hidden-dims", va.hidden, "Probe model hidden widths");
  opt(verify, "--embed-dim", va.embed_dim, "Probe model embedding dim");
  verify->add_flag("--conservative-nl", va.conservative_nl,
                   "Verify against the (G1+G2+nL)B bound");
  opt(verify, "--seed", va.seed, "Sweep seed");
  opt(verify, "--out", va.out, "Optional JSON report path");

  std::vector<std::string> args;
  try {
    args = splice_config_file(argc, argv);
  } catch (const logitdp::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const logitdp::DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
  std::vector<const char*> cargs;
  cargs.push_back(argv[0]);
  for (const std::string& s : args) cargs.push_back(s.c_str());
  try {
    app.parse(static_cast<int>(cargs.size()), cargs.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (pretrain->parsed()) return cmd_pretrain(pa);
    if (finetune->parsed()) return cmd_finetune(fa);
    if (evaluate->parsed()) return cmd_evaluate(ea);
    if (verify->parsed()) return cmd_verify_sensitivity(va);
  } catch (const logitdp::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const logitdp::DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitViolation;
  } catch (const logitdp::DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitConfig;
}
