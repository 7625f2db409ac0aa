#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "sda/config.hpp"
#include "sda/data.hpp"
#include "sda/network.hpp"

namespace sda {

struct GaussianSdaModel {
  NetworkParams net;
  double w0 = 1.0;
  double b0 = 0.0;
  double tau0 = 1.0;
  double tauz = 1.0;
  int copies = 1;
};

// Least-squares calibration of the scalar top layer:
//   w0 = Cov(z0, y) / Var(z0),  b0 = mean(y) - w0 * mean(z0).
// Population (divide-by-n) moments; the n vs n-1 convention cancels in w0.
std::pair<double, double> update_top_layer(const Eigen::VectorXd& z0,
                                           const Eigen::VectorXd& y);

// Gaussian conditional for one entry of Z0 given observation and network
// output.  Completing the square in z0 for y = w0 z0 + b0 + e0, z0 ~ N(f,
// tauz^2) gives
//   var  = tau0^2 tauz^2 / (w0^2 tauz^2 + tau0^2)
//   mean = (w0 tauz^2 (y - b0) + tau0^2 f) / (w0^2 tauz^2 + tau0^2).
// paper_literal squares w0 in the numerator's first term instead; the two
// coincide at w0 = 1.
std::pair<double, double> z0_gaussian_moments(double y, double f, double w0,
                                              double b0, double tau0,
                                              double tauz,
                                              bool paper_literal = false);

// One copy's worth of Z0 draws (length = y.size()).
Eigen::VectorXd sample_z0_gaussian(const Eigen::VectorXd& y,
                                   const Eigen::VectorXd& f_out, double w0,
                                   double b0, double tau0, double tauz,
                                   Rng& rng, bool paper_literal = false);

std::pair<GaussianSdaModel, std::vector<EpochStats>> fit_gaussian(
    const RunConfig& config, const Dataset& data, Rng& rng);

Eigen::VectorXd predict_gaussian(const GaussianSdaModel& model,
                                 const Eigen::MatrixXd& X);

}  // namespace sda
