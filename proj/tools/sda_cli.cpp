// Command-line front end: single training runs, benchmark grids, the
// mixture-identity checks, and synthetic data generation.

#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "sda/bench.hpp"
#include "sda/data.hpp"
#include "sda/errors.hpp"
#include "sda/samplers.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitData = 3;
constexpr int kExitDiverged = 4;

struct DatasetOptions {
  std::string name = "friedman";  // friedman | blobs | mnist
  int n = 1000;
  int p = 10;
  double noise = 1.0;
  double blob_center = 2.0;
  double blob_sd = 0.5;
  double train_frac = 0.7;
  std::string mnist_images, mnist_labels;
  std::vector<int> digits = {3, 8};
};

void add_dataset_options(CLI::App* cmd, DatasetOptions& opt) {
  cmd->add_option("--dataset", opt.name, "friedman, blobs or mnist")
      ->check(CLI::IsMember({"friedman", "blobs", "mnist"}));
  cmd->add_option("--n", opt.n, "sample count for synthetic data");
  cmd->add_option("--p", opt.p, "input dimension (friedman)");
  cmd->add_option("--noise", opt.noise, "friedman noise sd");
  cmd->add_option("--blob-center", opt.blob_center);
  cmd->add_option("--blob-sd", opt.blob_sd);
  cmd->add_option("--train-frac", opt.train_frac, "training fraction");
  cmd->add_option("--mnist-images", opt.mnist_images, "IDX image file");
  cmd->add_option("--mnist-labels", opt.mnist_labels, "IDX label file");
  cmd->add_option("--digits", opt.digits, "digit pair, e.g. --digits 3 8")
      ->expected(2);
}

void add_run_options(CLI::App* cmd, sda::RunConfig& cfg) {
  cmd->add_option("--method", cfg.method,
                  "sda-gr, sda-svm, sda-logit or dl-baseline");
  cmd->add_option("--layers", cfg.hidden, "hidden layer widths");
  cmd->add_option("--dropout", cfg.dropout, "per-hidden-layer dropout rates");
  cmd->add_option("--epochs", cfg.epochs);
  cmd->add_option("--lr", cfg.lr);
  cmd->add_option("--batch", cfg.batch);
  cmd->add_option("--J", cfg.copies, "stacking copies");
  cmd->add_option("--tau0", cfg.tau0);
  cmd->add_option("--tauz", cfg.tauz);
  cmd->add_option("--seed", cfg.seed);
  cmd->add_flag("--paper-literal", cfg.paper_literal,
                "use the printed conditional-moment forms");
  cmd->add_flag("--logit-plain-weights", cfg.logit_plain_weights,
                "weight-only reading of the logit SGD step");
}

sda::Dataset build_dataset(const DatasetOptions& opt, std::uint64_t seed) {
  sda::Rng rng(sda::Rng(seed).stream(0xda7a).seed());
  sda::Dataset ds;
  if (opt.name == "friedman") {
    ds = sda::gen_friedman(opt.n, opt.p, opt.noise, rng);
  } else if (opt.name == "blobs") {
    ds = sda::gen_blobs(opt.n, opt.blob_center, opt.blob_sd, rng);
  } else {
    if (opt.mnist_images.empty() || opt.mnist_labels.empty()) {
      throw sda::ConfigError("mnist dataset needs --mnist-images and "
                             "--mnist-labels");
    }
    const sda::IdxImages images = sda::load_idx_images(opt.mnist_images);
    const auto labels = sda::load_idx_labels(opt.mnist_labels);
    ds = sda::filter_binary(images, labels, opt.digits[0], opt.digits[1]);
  }
  sda::Rng split_rng(sda::Rng(seed).stream(0x5b117).seed());
  sda::split_dataset(ds, opt.train_frac, split_rng);
  return ds;
}

int cmd_train(const sda::RunConfig& cfg, const DatasetOptions& dopt,
              const std::string& out_path) {
  const sda::Dataset ds = build_dataset(dopt, cfg.seed);
  sda::Rng rng(cfg.seed);
  const auto stats = sda::run_trainer(cfg, ds, rng);
  const auto rows = sda::to_records(cfg, dopt.name, ds, stats, false);
  if (out_path.empty()) {
    sda::write_csv_header(std::cout);
    sda::write_csv_rows(std::cout, rows);
  } else {
    std::ofstream out(out_path);
    if (!out) throw sda::DataError("cannot open " + out_path);
    sda::write_csv_header(out);
    sda::write_csv_rows(out, rows);
  }
  std::fprintf(stderr, "%s: %d epochs, final train=%.6g test=%.6g\n",
               cfg.method.c_str(), static_cast<int>(stats.size()),
               stats.back().train_metric, stats.back().test_metric);
  return kExitOk;
}

int cmd_bench(const sda::RunConfig& cfg, const DatasetOptions& dopt,
              int repeats, const std::string& out_path) {
  const sda::Dataset ds = build_dataset(dopt, cfg.seed);
  const auto result = sda::run_experiment(cfg, dopt.name, ds, repeats,
                                          out_path);
  std::fprintf(stderr, "bench: %d runs, %d rows -> %s\n",
               result.runs_completed, result.rows_written, out_path.c_str());
  return kExitOk;
}

int cmd_verify_identities() {
  int failures = 0;
  auto report = [&failures](const char* name, double max_err, double bound) {
    const bool ok = max_err < bound;
    if (!ok) ++failures;
    std::printf("%-6s max |lhs-rhs| = %.3e  (bound %.1e)  %s\n", name,
                max_err, bound, ok ? "ok" : "FAIL");
  };

  double max_err = 0.0;
  for (double a : {0.5, 1.0, 2.0}) {
    for (double c : {0.5, 1.0, 2.0}) {
      sda::MixtureIdentity id{sda::IdentityKind::relu, a, 1.0, c, 0.5};
      for (double x = -3.0; x <= 3.0 + 1e-9; x += 0.5) {
        max_err = std::max(max_err, sda::verify_identity(id, x).abs_err);
      }
    }
  }
  report("relu", max_err, 1e-6);

  max_err = 0.0;
  {
    sda::MixtureIdentity id{sda::IdentityKind::lasso, 1.0, 1.0, 1.0, 0.5};
    for (double x = -3.0; x <= 3.0 + 1e-9; x += 0.5) {
      max_err = std::max(max_err, sda::verify_identity(id, x).abs_err);
    }
  }
  report("lasso", max_err, 1e-6);

  max_err = 0.0;
  for (double tau : {0.25, 0.5, 0.9}) {
    sda::MixtureIdentity id{sda::IdentityKind::check, 1.0, 1.0, 1.0, tau};
    for (double x = -3.0; x <= 3.0 + 1e-9; x += 0.5) {
      max_err = std::max(max_err, sda::verify_identity(id, x).abs_err);
    }
  }
  report("check", max_err, 1e-6);

  max_err = 0.0;
  for (double a : {0.5, 1.0, 2.0}) {
    for (double b : {0.5, 1.0, 2.0}) {
      sda::MixtureIdentity id{sda::IdentityKind::logit, a, b, 1.0, 0.5};
      for (double psi = -4.0; psi <= 4.0 + 1e-9; psi += 0.5) {
        max_err = std::max(max_err, sda::verify_identity(id, psi).abs_err);
      }
    }
  }
  report("logit", max_err, 1e-12);

  return failures == 0 ? kExitOk : 1;
}

int cmd_gen_data(const DatasetOptions& dopt, std::uint64_t seed,
                 const std::string& out_path) {
  sda::Rng rng(seed);
  sda::Dataset ds;
  if (dopt.name == "friedman") {
    ds = sda::gen_friedman(dopt.n, dopt.p, dopt.noise, rng);
  } else if (dopt.name == "blobs") {
    ds = sda::gen_blobs(dopt.n, dopt.blob_center, dopt.blob_sd, rng);
  } else {
    throw sda::ConfigError("gen-data supports friedman and blobs");
  }
  std::ofstream out(out_path);
  if (!out) throw sda::DataError("cannot open " + out_path);
  for (int j = 0; j < ds.X.cols(); ++j) out << 'x' << (j + 1) << ',';
  out << "y\n";
  char buf[40];
  for (Eigen::Index i = 0; i < ds.X.rows(); ++i) {
    for (Eigen::Index j = 0; j < ds.X.cols(); ++j) {
      std::snprintf(buf, sizeof(buf), "%.17g", ds.X(i, j));
      out << buf << ',';
    }
    std::snprintf(buf, sizeof(buf), "%.17g", ds.y(i));
    out << buf << '\n';
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Scalable data-augmentation trainers and benchmark harness"};
  app.require_subcommand(1);
  app.set_config("--config", "", "flat key=value config file; flags win");

  sda::RunConfig cfg;
  DatasetOptions dopt;
  std::string out_path;
  int repeats = 1;

  CLI::App* train = app.add_subcommand("train", "run one training job");
  add_run_options(train, cfg);
  add_dataset_options(train, dopt);
  train->add_option("--out", out_path, "metrics CSV path (default stdout)");

  CLI::App* bench =
      app.add_subcommand("bench", "seeded repeats, metrics to CSV");
  add_run_options(bench, cfg);
  add_dataset_options(bench, dopt);
  bench->add_option("--repeats", repeats);
  bench->add_option("--out", out_path, "metrics CSV path")->required();

  CLI::App* verify = app.add_subcommand(
      "verify-identities", "numerically check the mixture identities");
  (void)verify;

  CLI::App* gen = app.add_subcommand("gen-data", "write a dataset as CSV");
  add_dataset_options(gen, dopt);
  std::uint64_t gen_seed = 1;
  gen->add_option("--seed", gen_seed);
  gen->add_option("--out", out_path, "CSV path")->required();

  try {
    app.parse(argc, argv);
    if (train->parsed()) return cmd_train(cfg, dopt, out_path);
    if (bench->parsed()) return cmd_bench(cfg, dopt, repeats, out_path);
    if (verify->parsed()) return cmd_verify_identities();
    if (gen->parsed()) return cmd_gen_data(dopt, gen_seed, out_path);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  } catch (const sda::DivergedError& e) {
    std::fprintf(stderr, "diverged at epoch %d: %s\n", e.epoch, e.what());
    return kExitDiverged;
  } catch (const sda::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const sda::DataError& e) {
    std::fprintf(stderr, "data error: %s\n", e.what());
    return kExitData;
  } catch (const sda::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitConfig;
  }
  return kExitOk;
}
