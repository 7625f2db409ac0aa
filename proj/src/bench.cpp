#include "sda/bench.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "sda/errors.hpp"
#include "sda/gaussian.hpp"
#include "sda/logit.hpp"
#include "sda/svm.hpp"

namespace sda {

void RunConfig::validate() const {
  if (method != "sda-gr" && method != "sda-svm" && method != "sda-logit" &&
      method != "dl-baseline") {
    throw ConfigError("unknown method: " + method);
  }
  if (epochs < 1) throw ConfigError("epochs must be >= 1");
  if (!(lr > 0.0)) throw ConfigError("lr must be > 0");
  if (batch < 1) throw ConfigError("batch must be >= 1");
  if (copies < 1) throw ConfigError("J must be >= 1");
  if (!(tau0 > 0.0) || !(tauz > 0.0)) throw ConfigError("tau0/tauz must be > 0");
  if (!dropout.empty() && dropout.size() != hidden.size()) {
    throw ConfigError("need one dropout rate per hidden layer");
  }
  for (double r : dropout) {
    if (r < 0.0 || r >= 1.0) throw ConfigError("dropout rates must be in [0,1)");
  }
  for (int h : hidden) {
    if (h < 1) throw ConfigError("hidden widths must be >= 1");
  }
}

std::pair<NetworkParams, std::vector<EpochStats>> fit_baseline_dl(
    const RunConfig& config, const Dataset& data, Rng& rng) {
  config.validate();
  data.validate();
  const Eigen::MatrixXd x_train = data.train_X();
  const Eigen::VectorXd y_train = data.train_y();
  const Eigen::MatrixXd x_test = data.test_X();
  const Eigen::VectorXd y_test = data.test_y();
  const auto dropout = config.dropout_or_zero();
  const bool classify = data.kind == Dataset::Kind::binary;

  NetworkParams net = make_network(static_cast<int>(x_train.cols()),
                                   config.hidden, rng);

  std::vector<EpochStats> stats;
  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    const auto t_start = std::chrono::steady_clock::now();
    try {
      sgd_epoch(net, x_train, y_train,
                Eigen::VectorXd::Ones(y_train.size()), config.batch,
                config.lr, dropout, rng);
      EpochStats s;
      s.epoch = epoch;
      const Eigen::VectorXd f_tr = predict(net, x_train);
      const Eigen::VectorXd f_te = predict(net, x_test);
      if (classify) {
        double wrong_tr = 0.0, wrong_te = 0.0;
        for (Eigen::Index i = 0; i < y_train.size(); ++i) {
          if ((f_tr(i) > 0.0 ? 1.0 : -1.0) != y_train(i)) wrong_tr += 1.0;
        }
        for (Eigen::Index i = 0; i < y_test.size(); ++i) {
          if ((f_te(i) > 0.0 ? 1.0 : -1.0) != y_test(i)) wrong_te += 1.0;
        }
        s.train_metric = wrong_tr / static_cast<double>(y_train.size());
        s.test_metric = wrong_te / static_cast<double>(y_test.size());
      } else {
        s.train_metric = (f_tr - y_train).array().square().mean();
        s.test_metric = (f_te - y_test).array().square().mean();
      }
      if (!std::isfinite(s.train_metric) || !std::isfinite(s.test_metric)) {
        throw ValidationError("non-finite metric");
      }
      s.wall_ms = std::chrono::duration<double, std::milli>(
                      std::chrono::steady_clock::now() - t_start)
                      .count();
      stats.push_back(s);
    } catch (const ValidationError& e) {
      throw DivergedError(std::string("fit_baseline_dl diverged: ") + e.what(),
                          epoch);
    }
  }
  return {std::move(net), std::move(stats)};
}

std::vector<EpochStats> run_trainer(const RunConfig& config,
                                    const Dataset& data, Rng& rng) {
  if (config.method == "sda-gr") return fit_gaussian(config, data, rng).second;
  if (config.method == "sda-svm") return fit_svm(config, data, rng).second;
  if (config.method == "sda-logit") return fit_logit(config, data, rng).second;
  if (config.method == "dl-baseline") {
    return fit_baseline_dl(config, data, rng).second;
  }
  throw ConfigError("unknown method: " + config.method);
}

std::vector<MetricsRecord> to_records(const RunConfig& config,
                                      const std::string& dataset_name,
                                      const Dataset& data,
                                      const std::vector<EpochStats>& stats,
                                      bool timings) {
  const bool classify = data.kind == Dataset::Kind::binary;
  const std::string train_name = classify ? "train_err" : "train_mse";
  const std::string test_name = classify ? "test_err" : "test_mse";
  const std::string run_id = config.method + "-" + dataset_name + "-s" +
                             std::to_string(config.seed);
  std::vector<MetricsRecord> rows;
  for (const EpochStats& s : stats) {
    MetricsRecord base;
    base.run_id = run_id;
    base.method = config.method;
    base.dataset = dataset_name;
    base.seed = config.seed;
    base.epoch = s.epoch;
    if (timings) {
      base.metric = "epoch_wall_ms";
      base.value = s.wall_ms;
      rows.push_back(base);
    } else {
      base.metric = train_name;
      base.value = s.train_metric;
      rows.push_back(base);
      base.metric = test_name;
      base.value = s.test_metric;
      rows.push_back(base);
    }
  }
  return rows;
}

namespace {

// RFC-4180 quoting; our field values only need it when they contain commas
// or quotes.
std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string format_value(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

void write_csv_header(std::ostream& out) {
  out << "run_id,method,dataset,seed,epoch,metric,value\n";
}

void write_csv_rows(std::ostream& out,
                    const std::vector<MetricsRecord>& rows) {
  for (const MetricsRecord& r : rows) {
    out << csv_field(r.run_id) << ',' << csv_field(r.method) << ','
        << csv_field(r.dataset) << ',' << r.seed << ',' << r.epoch << ','
        << csv_field(r.metric) << ',' << format_value(r.value) << '\n';
  }
}

BenchResult run_experiment(const RunConfig& config,
                           const std::string& dataset_name,
                           const Dataset& data, int repeats,
                           const std::string& out_path) {
  if (repeats < 0) throw ConfigError("repeats must be >= 0");
  std::ofstream metrics(out_path);
  if (!metrics) throw DataError("cannot open " + out_path);
  std::ofstream timings(out_path + ".timings.csv");
  if (!timings) throw DataError("cannot open " + out_path + ".timings.csv");
  write_csv_header(metrics);
  write_csv_header(timings);

  BenchResult result;
  for (int r = 0; r < repeats; ++r) {
    RunConfig run = config;
    run.seed = config.seed + static_cast<std::uint64_t>(r);
    Rng rng(run.seed);
    const std::vector<EpochStats> stats = run_trainer(run, data, rng);
    const auto rows = to_records(run, dataset_name, data, stats, false);
    const auto wall = to_records(run, dataset_name, data, stats, true);
    write_csv_rows(metrics, rows);
    write_csv_rows(timings, wall);
    metrics.flush();
    timings.flush();
    result.runs_completed += 1;
    result.rows_written += static_cast<int>(rows.size());
  }
  return result;
}

}  // namespace sda
