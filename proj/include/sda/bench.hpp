#pragma once

#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "sda/config.hpp"
#include "sda/data.hpp"
#include "sda/network.hpp"

namespace sda {

struct MetricsRecord {
  std::string run_id;
  std::string method;
  std::string dataset;
  std::uint64_t seed = 0;
  int epoch = 0;
  std::string metric;  // train_mse/test_mse/train_err/test_err/epoch_wall_ms
  double value = 0.0;
};

// Plain SGD on squared loss; classification targets are the +-1 labels with
// sign prediction.  Same epoch/metric schedule as the SDA trainers.
std::pair<NetworkParams, std::vector<EpochStats>> fit_baseline_dl(
    const RunConfig& config, const Dataset& data, Rng& rng);

// Dispatches on config.method and returns the per-epoch stats.
std::vector<EpochStats> run_trainer(const RunConfig& config,
                                    const Dataset& data, Rng& rng);

// Expands stats into one row per (epoch, metric).  Wall-time rows are kept
// separate from the value metrics so the metrics CSV is byte-reproducible.
std::vector<MetricsRecord> to_records(const RunConfig& config,
                                      const std::string& dataset_name,
                                      const Dataset& data,
                                      const std::vector<EpochStats>& stats,
                                      bool timings);

void write_csv_header(std::ostream& out);
void write_csv_rows(std::ostream& out, const std::vector<MetricsRecord>& rows);

struct BenchResult {
  int runs_completed = 0;
  int rows_written = 0;
};

// Runs `repeats` seeded repetitions of config on the dataset, writing value
// metrics to out_path and wall-time metrics to <out_path>.timings.csv.
// Results for run r use seed config.seed + r.  Rows are flushed per
// completed run.
BenchResult run_experiment(const RunConfig& config,
                           const std::string& dataset_name,
                           const Dataset& data, int repeats,
                           const std::string& out_path);

}  // namespace sda
