#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "sda/config.hpp"
#include "sda/data.hpp"
#include "sda/network.hpp"

namespace sda {

struct LogitSdaModel {
  NetworkParams net;
};

struct LogitWeights {
  Eigen::VectorXd omega;  // in (0, 1/4]
  Eigen::VectorXd z;      // z_i = y_i * yhat_i
};

// z_i = y_i * yhat_i, omega_i = (sigmoid(z_i) - 1/2) / z_i.
LogitWeights compute_sample_weights(const Eigen::VectorXd& y,
                                    const Eigen::VectorXd& yhat);

// Exact weighted-least-squares top-layer update: solves
//   (Z1' diag(y) Omega diag(y) Z1) w = (1/2) Z1' y
// without forming an inverse.  Since y_i^2 = 1 the normal matrix is
// Z1' Omega Z1.  A ridge jitter of 1e-8 is added if the solve is rank
// deficient.
Eigen::VectorXd exact_w1_update(const Eigen::MatrixXd& Z1,
                                const Eigen::VectorXd& y,
                                const Eigen::VectorXd& omega);

// Logistic negative log-likelihood sum_i log(1 + exp(-y_i * Z1_i' w)).
double logistic_nll(const Eigen::MatrixXd& Z1, const Eigen::VectorXd& y,
                    const Eigen::VectorXd& w);

std::pair<LogitSdaModel, std::vector<EpochStats>> fit_logit(
    const RunConfig& config, const Dataset& data, Rng& rng);

// sign(f(x)); a score of exactly 0 maps to -1.
Eigen::VectorXd predict_logit(const LogitSdaModel& model,
                              const Eigen::MatrixXd& X);

}  // namespace sda
