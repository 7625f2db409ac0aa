#include "sda/logit.hpp"

#include <Eigen/Cholesky>
#include <chrono>
#include <cmath>

#include "sda/errors.hpp"
#include "sda/samplers.hpp"

namespace sda {

LogitWeights compute_sample_weights(const Eigen::VectorXd& y,
                                    const Eigen::VectorXd& yhat) {
  if (y.size() != yhat.size()) {
    throw DimensionError("compute_sample_weights: length mismatch");
  }
  LogitWeights out;
  out.z = y.cwiseProduct(yhat);
  out.omega.resize(y.size());
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    out.omega(i) = pg_em_weight(out.z(i));
  }
  return out;
}

Eigen::VectorXd exact_w1_update(const Eigen::MatrixXd& Z1,
                                const Eigen::VectorXd& y,
                                const Eigen::VectorXd& omega) {
  if (Z1.rows() != y.size() || Z1.rows() != omega.size()) {
    throw DimensionError("exact_w1_update: length mismatch");
  }
  const Eigen::MatrixXd normal =
      Z1.transpose() * omega.asDiagonal() * Z1;  // y_i^2 = 1
  const Eigen::VectorXd rhs = 0.5 * Z1.transpose() * y;

  Eigen::LDLT<Eigen::MatrixXd> solver(normal);
  if (solver.info() == Eigen::Success && solver.isPositive()) {
    const Eigen::VectorXd w = solver.solve(rhs);
    if (w.allFinite()) return w;
  }
  Eigen::MatrixXd jittered = normal;
  jittered.diagonal().array() += 1e-8;
  Eigen::LDLT<Eigen::MatrixXd> fallback(jittered);
  const Eigen::VectorXd w = fallback.solve(rhs);
  if (fallback.info() != Eigen::Success || !w.allFinite()) {
    throw DataError("exact_w1_update: rank-deficient system");
  }
  return w;
}

double logistic_nll(const Eigen::MatrixXd& Z1, const Eigen::VectorXd& y,
                    const Eigen::VectorXd& w) {
  double nll = 0.0;
  const Eigen::VectorXd margin = y.cwiseProduct(Z1 * w);
  for (Eigen::Index i = 0; i < margin.size(); ++i) {
    // log(1 + exp(-m)) computed stably for both signs of m.
    const double m = margin(i);
    nll += m > 0.0 ? std::log1p(std::exp(-m)) : -m + std::log1p(std::exp(m));
  }
  return nll;
}

std::pair<LogitSdaModel, std::vector<EpochStats>> fit_logit(
    const RunConfig& config, const Dataset& data, Rng& rng) {
  config.validate();
  data.validate();
  if (data.kind != Dataset::Kind::binary) {
    throw DataError("fit_logit: needs +-1 labels");
  }
  const Eigen::MatrixXd x_train = data.train_X();
  const Eigen::VectorXd y_train = data.train_y();
  const Eigen::MatrixXd x_test = data.test_X();
  const Eigen::VectorXd y_test = data.test_y();
  const auto dropout = config.dropout_or_zero();

  LogitSdaModel model;
  model.net = make_network(static_cast<int>(x_train.cols()), config.hidden,
                           rng);

  std::vector<EpochStats> stats;
  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    const auto t_start = std::chrono::steady_clock::now();
    try {
      const Eigen::VectorXd yhat = predict(model.net, x_train);
      const LogitWeights lw = compute_sample_weights(y_train, yhat);

      // Weighted regression of the EM working target y_i/(2 omega_i) on the
      // network; the plain reading keeps y itself as the target.
      Eigen::VectorXd targets =
          config.logit_plain_weights
              ? y_train
              : (y_train.array() / (2.0 * lw.omega.array())).matrix();
      sgd_epoch(model.net, x_train, targets, lw.omega, config.batch,
                config.lr, dropout, rng);

      EpochStats s;
      s.epoch = epoch;
      const Eigen::VectorXd pred_tr = predict_logit(model, x_train);
      const Eigen::VectorXd pred_te = predict_logit(model, x_test);
      double wrong_tr = 0.0, wrong_te = 0.0;
      for (Eigen::Index i = 0; i < y_train.size(); ++i) {
        if (pred_tr(i) != y_train(i)) wrong_tr += 1.0;
      }
      for (Eigen::Index i = 0; i < y_test.size(); ++i) {
        if (pred_te(i) != y_test(i)) wrong_te += 1.0;
      }
      s.train_metric = wrong_tr / static_cast<double>(y_train.size());
      s.test_metric = wrong_te / static_cast<double>(y_test.size());
      s.wall_ms = std::chrono::duration<double, std::milli>(
                      std::chrono::steady_clock::now() - t_start)
                      .count();
      stats.push_back(s);
    } catch (const ValidationError& e) {
      throw DivergedError(std::string("fit_logit diverged: ") + e.what(),
                          epoch);
    }
  }
  return {std::move(model), std::move(stats)};
}

Eigen::VectorXd predict_logit(const LogitSdaModel& model,
                              const Eigen::MatrixXd& X) {
  const Eigen::VectorXd score = predict(model.net, X);
  Eigen::VectorXd pred(score.size());
  for (Eigen::Index i = 0; i < score.size(); ++i) {
    pred(i) = score(i) > 0.0 ? 1.0 : -1.0;
  }
  return pred;
}

}  // namespace sda
