#include "sda/gaussian.hpp"

#include <chrono>
#include <cmath>

#include "sda/errors.hpp"

namespace sda {

std::pair<double, double> update_top_layer(const Eigen::VectorXd& z0,
                                           const Eigen::VectorXd& y) {
  const Eigen::Index n = z0.size();
  if (n != y.size() || n < 2) {
    throw DimensionError("update_top_layer: need two equal-length vectors");
  }
  const double z_mean = z0.mean();
  const double y_mean = y.mean();
  const double var_z = (z0.array() - z_mean).square().sum() / n;
  if (var_z <= 0.0) {
    throw DataError("update_top_layer: degenerate latent (zero variance)");
  }
  const double cov = ((z0.array() - z_mean) * (y.array() - y_mean)).sum() / n;
  const double w0 = cov / var_z;
  return {w0, y_mean - w0 * z_mean};
}

std::pair<double, double> z0_gaussian_moments(double y, double f, double w0,
                                              double b0, double tau0,
                                              double tauz,
                                              bool paper_literal) {
  if (!(tau0 > 0.0) || !(tauz > 0.0)) {
    throw ValidationError("z0_gaussian_moments: scales must be > 0");
  }
  const double t0 = tau0 * tau0, tz = tauz * tauz;
  const double denom = w0 * w0 * tz + t0;
  const double num_w = paper_literal ? w0 * w0 : w0;
  const double mean = (num_w * tz * (y - b0) + t0 * f) / denom;
  const double var = t0 * tz / denom;
  return {mean, var};
}

Eigen::VectorXd sample_z0_gaussian(const Eigen::VectorXd& y,
                                   const Eigen::VectorXd& f_out, double w0,
                                   double b0, double tau0, double tauz,
                                   Rng& rng, bool paper_literal) {
  if (y.size() != f_out.size()) {
    throw DimensionError("sample_z0_gaussian: y/f length mismatch");
  }
  Eigen::VectorXd z0(y.size());
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    const auto [mean, var] =
        z0_gaussian_moments(y(i), f_out(i), w0, b0, tau0, tauz, paper_literal);
    z0(i) = rng.normal(mean, std::sqrt(var));
  }
  return z0;
}

std::pair<GaussianSdaModel, std::vector<EpochStats>> fit_gaussian(
    const RunConfig& config, const Dataset& data, Rng& rng) {
  config.validate();
  data.validate();
  if (data.kind != Dataset::Kind::regression) {
    throw DataError("fit_gaussian: needs real-valued targets");
  }
  const Eigen::MatrixXd x_train = data.train_X();
  const Eigen::VectorXd y_train = data.train_y();
  const Eigen::MatrixXd x_test = data.test_X();
  const Eigen::VectorXd y_test = data.test_y();
  const int n = static_cast<int>(y_train.size());
  const int J = config.copies;
  const auto dropout = config.dropout_or_zero();

  const StackedBatch stacked = stack(x_train, y_train, J);

  GaussianSdaModel model;
  model.net = make_network(static_cast<int>(x_train.cols()), config.hidden,
                           rng);
  model.tau0 = config.tau0;
  model.tauz = config.tauz;
  model.copies = J;

  // Chain starts at the data: Z0^(0) = y, replicated.
  Eigen::VectorXd z0 = stacked.y;

  std::vector<EpochStats> stats;
  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    const auto t_start = std::chrono::steady_clock::now();
    try {
      std::tie(model.w0, model.b0) = update_top_layer(z0, stacked.y);
      sgd_epoch(model.net, stacked.X, z0,
                Eigen::VectorXd::Ones(z0.size()), config.batch, config.lr,
                dropout, rng);
      const Eigen::VectorXd f_train = predict(model.net, x_train);
      for (int j = 0; j < J; ++j) {
        Rng copy_rng = rng.stream(static_cast<std::uint64_t>(epoch), j);
        z0.segment(static_cast<Eigen::Index>(j) * n, n) = sample_z0_gaussian(
            y_train, f_train, model.w0, model.b0, model.tau0, model.tauz,
            copy_rng, config.paper_literal);
      }

      EpochStats s;
      s.epoch = epoch;
      const Eigen::VectorXd yhat_tr = model.w0 * f_train;
      s.train_metric =
          (yhat_tr.array() + model.b0 - y_train.array()).square().mean();
      const Eigen::VectorXd yhat_te = predict_gaussian(model, x_test);
      s.test_metric = (yhat_te - y_test).array().square().mean();
      if (!std::isfinite(s.train_metric) || !std::isfinite(s.test_metric)) {
        throw ValidationError("fit_gaussian: non-finite metric");
      }
      s.wall_ms = std::chrono::duration<double, std::milli>(
                      std::chrono::steady_clock::now() - t_start)
                      .count();
      stats.push_back(s);
    } catch (const ValidationError& e) {
      throw DivergedError(std::string("fit_gaussian diverged: ") + e.what(),
                          epoch);
    }
  }
  return {std::move(model), std::move(stats)};
}

Eigen::VectorXd predict_gaussian(const GaussianSdaModel& model,
                                 const Eigen::MatrixXd& X) {
  Eigen::VectorXd f = predict(model.net, X);
  return (model.w0 * f).array() + model.b0;
}

}  // namespace sda
