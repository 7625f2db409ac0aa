#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "sda/config.hpp"
#include "sda/data.hpp"
#include "sda/network.hpp"

namespace sda {

struct SvmSdaModel {
  NetworkParams net;
  double w0 = 1.0;
  double tau0 = 1.0;
  double tauz = 1.0;
  int copies = 1;
};

// Slack draws: 1/lambda_i ~ IG(|1 - y_i z0_i w0|^{-1}, tau0^{-2}), the margin
// magnitude floored at 1e-8 so the IG mean stays finite on the margin.
Eigen::VectorXd sample_lambda(const Eigen::VectorXd& y,
                              const Eigen::VectorXd& z0, double w0,
                              double tau0, Rng& rng);

// Deterministic part of the W0 conditional:
//   mu_w     = sum y_i z0_i (1+lambda_i)/lambda_i / sum z0_i^2/lambda_i
//   sigma_w2 = 1 / sum z0_i^2/lambda_i          (using y_i^2 = 1).
std::pair<double, double> w0_posterior_svm(const Eigen::VectorXd& y,
                                           const Eigen::VectorXd& z0,
                                           const Eigen::VectorXd& lambda);

double sample_w0_svm(const Eigen::VectorXd& y, const Eigen::VectorXd& z0,
                     const Eigen::VectorXd& lambda, Rng& rng);

// Z0 conditional for one entry, from completing the square in z0 of
//   (1 + lambda - y z0 w0)^2 / (tau0^2 lambda) + (z0 - f)^2 / tauz^2:
//   precision = w0^2/(tau0^2 lambda) + 1/tauz^2
//   mean      = (w0 y (1+lambda)/(tau0^2 lambda) + f/tauz^2) / precision.
// paper_literal reproduces the printed mu_z/sigma_z2 instead.
std::pair<double, double> z0_svm_moments(double y, double f, double w0,
                                         double lambda, double tau0,
                                         double tauz,
                                         bool paper_literal = false);

Eigen::VectorXd sample_z0_svm(const Eigen::VectorXd& y,
                              const Eigen::VectorXd& f_out, double w0,
                              const Eigen::VectorXd& lambda, double tau0,
                              double tauz, Rng& rng,
                              bool paper_literal = false);

std::pair<SvmSdaModel, std::vector<EpochStats>> fit_svm(
    const RunConfig& config, const Dataset& data, Rng& rng);

// sign(w0 * f(x)); a score of exactly 0 maps to -1.
Eigen::VectorXd predict_svm(const SvmSdaModel& model,
                            const Eigen::MatrixXd& X);

}  // namespace sda
