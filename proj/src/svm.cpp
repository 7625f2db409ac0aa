#include "sda/svm.hpp"

#include <chrono>
#include <cmath>

#include "sda/errors.hpp"
#include "sda/samplers.hpp"

namespace sda {

namespace {

constexpr double kMarginFloor = 1e-8;

void check_labels(const Eigen::VectorXd& y) {
  bool pos = false, neg = false;
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    if (y(i) == 1.0) {
      pos = true;
    } else if (y(i) == -1.0) {
      neg = true;
    } else {
      throw DataError("labels must be +-1");
    }
  }
  if (!pos || !neg) throw DataError("degenerate data: single-class labels");
}

double error_rate(const Eigen::VectorXd& pred, const Eigen::VectorXd& y) {
  double wrong = 0.0;
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    if (pred(i) != y(i)) wrong += 1.0;
  }
  return wrong / static_cast<double>(y.size());
}

}  // namespace

Eigen::VectorXd sample_lambda(const Eigen::VectorXd& y,
                              const Eigen::VectorXd& z0, double w0,
                              double tau0, Rng& rng) {
  if (y.size() != z0.size()) {
    throw DimensionError("sample_lambda: y/z0 length mismatch");
  }
  if (!(tau0 > 0.0)) throw ValidationError("sample_lambda: tau0 must be > 0");
  const double shape = 1.0 / (tau0 * tau0);
  Eigen::VectorXd lambda(y.size());
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    const double margin =
        std::max(std::fabs(1.0 - y(i) * z0(i) * w0), kMarginFloor);
    lambda(i) = 1.0 / sample_inverse_gaussian(rng, 1.0 / margin, shape);
  }
  return lambda;
}

std::pair<double, double> w0_posterior_svm(const Eigen::VectorXd& y,
                                           const Eigen::VectorXd& z0,
                                           const Eigen::VectorXd& lambda) {
  if (y.size() != z0.size() || y.size() != lambda.size()) {
    throw DimensionError("w0_posterior_svm: length mismatch");
  }
  double num = 0.0, den = 0.0;
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    if (!(lambda(i) > 0.0)) {
      throw ValidationError("w0_posterior_svm: nonpositive lambda");
    }
    num += y(i) * z0(i) * (1.0 + lambda(i)) / lambda(i);
    den += z0(i) * z0(i) / lambda(i);
  }
  if (!(den > 0.0)) throw DataError("w0_posterior_svm: all z0 are zero");
  return {num / den, 1.0 / den};
}

double sample_w0_svm(const Eigen::VectorXd& y, const Eigen::VectorXd& z0,
                     const Eigen::VectorXd& lambda, Rng& rng) {
  const auto [mu, var] = w0_posterior_svm(y, z0, lambda);
  return rng.normal(mu, std::sqrt(var));
}

std::pair<double, double> z0_svm_moments(double y, double f, double w0,
                                         double lambda, double tau0,
                                         double tauz, bool paper_literal) {
  if (!(tau0 > 0.0) || !(tauz > 0.0) || !(lambda > 0.0)) {
    throw ValidationError("z0_svm_moments: scales and lambda must be > 0");
  }
  const double t0 = tau0 * tau0, tz = tauz * tauz;
  if (paper_literal) {
    const double mean =
        (w0 * tz * y + t0 * f * lambda) / (w0 * tz + t0 * lambda);
    const double var = t0 * tz * lambda / (w0 * w0 * tz + t0 * lambda);
    return {mean, var};
  }
  const double precision = w0 * w0 / (t0 * lambda) + 1.0 / tz;
  const double mean =
      (w0 * y * (1.0 + lambda) / (t0 * lambda) + f / tz) / precision;
  return {mean, 1.0 / precision};
}

Eigen::VectorXd sample_z0_svm(const Eigen::VectorXd& y,
                              const Eigen::VectorXd& f_out, double w0,
                              const Eigen::VectorXd& lambda, double tau0,
                              double tauz, Rng& rng, bool paper_literal) {
  if (y.size() != f_out.size() || y.size() != lambda.size()) {
    throw DimensionError("sample_z0_svm: length mismatch");
  }
  Eigen::VectorXd z0(y.size());
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    const auto [mean, var] = z0_svm_moments(y(i), f_out(i), w0, lambda(i),
                                            tau0, tauz, paper_literal);
    z0(i) = rng.normal(mean, std::sqrt(var));
  }
  return z0;
}

std::pair<SvmSdaModel, std::vector<EpochStats>> fit_svm(
    const RunConfig& config, const Dataset& data, Rng& rng) {
  config.validate();
  data.validate();
  if (data.kind != Dataset::Kind::binary) {
    throw DataError("fit_svm: needs +-1 labels");
  }
  const Eigen::MatrixXd x_train = data.train_X();
  const Eigen::VectorXd y_train = data.train_y();
  const Eigen::MatrixXd x_test = data.test_X();
  const Eigen::VectorXd y_test = data.test_y();
  check_labels(y_train);
  const int n = static_cast<int>(y_train.size());
  const int J = config.copies;
  const auto dropout = config.dropout_or_zero();

  const StackedBatch stacked = stack(x_train, y_train, J);

  SvmSdaModel model;
  model.net = make_network(static_cast<int>(x_train.cols()), config.hidden,
                           rng);
  model.tau0 = config.tau0;
  model.tauz = config.tauz;
  model.copies = J;

  Eigen::VectorXd z0 = stacked.y;

  std::vector<EpochStats> stats;
  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    const auto t_start = std::chrono::steady_clock::now();
    try {
      Eigen::VectorXd lambda(z0.size());
      for (int j = 0; j < J; ++j) {
        Rng copy_rng = rng.stream(static_cast<std::uint64_t>(epoch) * 2, j);
        lambda.segment(static_cast<Eigen::Index>(j) * n, n) = sample_lambda(
            y_train, z0.segment(static_cast<Eigen::Index>(j) * n, n),
            model.w0, model.tau0, copy_rng);
      }
      Rng w0_rng = rng.stream(static_cast<std::uint64_t>(epoch) * 2 + 1);
      model.w0 = sample_w0_svm(stacked.y, z0, lambda, w0_rng);

      sgd_epoch(model.net, stacked.X, z0,
                Eigen::VectorXd::Ones(z0.size()), config.batch, config.lr,
                dropout, rng);

      const Eigen::VectorXd f_train = predict(model.net, x_train);
      for (int j = 0; j < J; ++j) {
        Rng copy_rng =
            rng.stream(static_cast<std::uint64_t>(epoch) * 2 + 1, j + 1);
        z0.segment(static_cast<Eigen::Index>(j) * n, n) = sample_z0_svm(
            y_train, f_train, model.w0,
            lambda.segment(static_cast<Eigen::Index>(j) * n, n), model.tau0,
            model.tauz, copy_rng, config.paper_literal);
      }

      EpochStats s;
      s.epoch = epoch;
      s.train_metric = error_rate(predict_svm(model, x_train), y_train);
      s.test_metric = error_rate(predict_svm(model, x_test), y_test);
      s.wall_ms = std::chrono::duration<double, std::milli>(
                      std::chrono::steady_clock::now() - t_start)
                      .count();
      stats.push_back(s);
    } catch (const ValidationError& e) {
      throw DivergedError(std::string("fit_svm diverged: ") + e.what(), epoch);
    }
  }
  return {std::move(model), std::move(stats)};
}

Eigen::VectorXd predict_svm(const SvmSdaModel& model,
                            const Eigen::MatrixXd& X) {
  const Eigen::VectorXd score = model.w0 * predict(model.net, X);
  Eigen::VectorXd pred(score.size());
  for (Eigen::Index i = 0; i < score.size(); ++i) {
    pred(i) = score(i) > 0.0 ? 1.0 : -1.0;
  }
  return pred;
}

}  // namespace sda
