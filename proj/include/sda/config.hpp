#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace sda {

struct RunConfig {
  std::string method = "sda-gr";  // sda-gr | sda-svm | sda-logit | dl-baseline
  std::vector<int> hidden = {64};
  std::vector<double> dropout;  // per hidden layer; empty means all zero
  int epochs = 20;
  double lr = 1e-3;
  int batch = 32;
  int copies = 10;  // J
  double tau0 = 1.0;
  double tauz = 1.0;
  std::uint64_t seed = 1;
  bool paper_literal = false;      // printed conditional forms (see README)
  bool logit_plain_weights = false;  // weight-only reading of the logit step

  std::vector<double> dropout_or_zero() const {
    if (!dropout.empty()) return dropout;
    return std::vector<double>(hidden.size(), 0.0);
  }
  void validate() const;
};

struct EpochStats {
  int epoch = 0;  // 1-based
  double train_metric = 0.0;
  double test_metric = 0.0;
  double wall_ms = 0.0;
};

}  // namespace sda
