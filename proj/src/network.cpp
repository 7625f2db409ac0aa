#include "sda/network.hpp"

#include <cmath>
#include <numeric>

#include "sda/errors.hpp"

namespace sda {

std::vector<int> NetworkParams::layer_sizes() const {
  std::vector<int> sizes;
  sizes.push_back(input_dim());
  for (const auto& w : weights) sizes.push_back(static_cast<int>(w.cols()));
  return sizes;
}

void NetworkParams::validate() const {
  if (weights.empty() || weights.size() != biases.size()) {
    throw DimensionError("network: weight/bias layer counts differ");
  }
  for (std::size_t l = 0; l < weights.size(); ++l) {
    if (biases[l].size() != weights[l].cols()) {
      throw DimensionError("network: bias length mismatch at layer " +
                           std::to_string(l));
    }
    if (l + 1 < weights.size() &&
        weights[l].cols() != weights[l + 1].rows()) {
      throw DimensionError("network: adjacent layer shape mismatch at layer " +
                           std::to_string(l));
    }
    if (!weights[l].allFinite() || !biases[l].allFinite()) {
      throw ValidationError("network: non-finite parameters at layer " +
                            std::to_string(l));
    }
  }
  if (weights.back().cols() != 1) {
    throw DimensionError("network: output layer must be scalar");
  }
}

NetworkParams make_network(int input_dim, const std::vector<int>& hidden,
                           Rng& rng) {
  if (input_dim < 1) throw DimensionError("make_network: input_dim < 1");
  std::vector<int> sizes;
  sizes.push_back(input_dim);
  for (int h : hidden) {
    if (h < 1) throw DimensionError("make_network: hidden width < 1");
    sizes.push_back(h);
  }
  sizes.push_back(1);

  NetworkParams params;
  for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
    const int fan_in = sizes[l], fan_out = sizes[l + 1];
    const double half_width = std::sqrt(6.0 / (fan_in + fan_out));
    Eigen::MatrixXd w(fan_in, fan_out);
    for (int i = 0; i < fan_in; ++i) {
      for (int j = 0; j < fan_out; ++j) {
        w(i, j) = (2.0 * rng.uniform() - 1.0) * half_width;
      }
    }
    params.weights.push_back(std::move(w));
    params.biases.push_back(Eigen::VectorXd::Zero(fan_out));
  }
  return params;
}

ForwardTrace forward(const NetworkParams& params, const Eigen::MatrixXd& X,
                     const std::vector<double>& dropout_rates, Rng& rng,
                     bool train_mode) {
  params.validate();
  const int n_hidden = params.num_layers() - 1;
  if (X.cols() != params.input_dim()) {
    throw DimensionError("forward: input width does not match network");
  }
  if (!X.allFinite()) throw ValidationError("forward: non-finite input");
  if (static_cast<int>(dropout_rates.size()) != n_hidden) {
    throw DimensionError("forward: one dropout rate per hidden layer");
  }
  for (double r : dropout_rates) {
    if (r < 0.0 || r >= 1.0) {
      throw ValidationError("forward: dropout rate must be in [0,1)");
    }
  }

  ForwardTrace trace;
  trace.activations.push_back(X);
  for (int l = 0; l < n_hidden; ++l) {
    Eigen::MatrixXd pre = trace.activations.back() * params.weights[l];
    pre.rowwise() += params.biases[l].transpose();
    Eigen::MatrixXd act = pre.cwiseMax(0.0);
    if (train_mode) {
      // One mask per hidden layer (all-ones at rate 0) so backward can index
      // masks by layer.
      Eigen::MatrixXd mask = Eigen::MatrixXd::Ones(act.rows(), act.cols());
      if (dropout_rates[l] > 0.0) {
        const double keep = 1.0 - dropout_rates[l];
        for (Eigen::Index i = 0; i < mask.rows(); ++i) {
          for (Eigen::Index j = 0; j < mask.cols(); ++j) {
            mask(i, j) = rng.uniform() < keep ? 1.0 / keep : 0.0;
          }
        }
        act = act.cwiseProduct(mask);
      }
      trace.dropout_masks.push_back(std::move(mask));
    }
    trace.pre_activations.push_back(std::move(pre));
    trace.activations.push_back(std::move(act));
  }
  const int top = n_hidden;
  trace.outputs = trace.activations.back() * params.weights[top];
  trace.outputs.array() += params.biases[top](0);
  return trace;
}

Eigen::VectorXd predict(const NetworkParams& params, const Eigen::MatrixXd& X) {
  Rng unused(0);
  const std::vector<double> no_dropout(params.num_layers() - 1, 0.0);
  return forward(params, X, no_dropout, unused, false).outputs;
}

NetworkParams backward(const NetworkParams& params, const ForwardTrace& trace,
                       const Eigen::VectorXd& residual_grad,
                       const Eigen::VectorXd& sample_weights) {
  const Eigen::Index n = trace.outputs.size();
  if (residual_grad.size() != n || sample_weights.size() != n) {
    throw DimensionError("backward: gradient/weight length mismatch");
  }
  const int n_hidden = params.num_layers() - 1;
  const bool has_masks = !trace.dropout_masks.empty();

  NetworkParams grads;
  grads.weights.resize(params.weights.size());
  grads.biases.resize(params.biases.size());

  Eigen::VectorXd g = residual_grad.cwiseProduct(sample_weights);
  grads.weights[n_hidden] = trace.activations[n_hidden].transpose() * g;
  grads.biases[n_hidden] = Eigen::VectorXd::Constant(1, g.sum());

  Eigen::MatrixXd delta = g * params.weights[n_hidden].transpose();
  for (int l = n_hidden - 1; l >= 0; --l) {
    delta = delta.cwiseProduct(
        (trace.pre_activations[l].array() > 0.0).cast<double>().matrix());
    if (has_masks) delta = delta.cwiseProduct(trace.dropout_masks[l]);
    grads.weights[l] = trace.activations[l].transpose() * delta;
    grads.biases[l] = delta.colwise().sum().transpose();
    if (l > 0) delta = delta * params.weights[l].transpose();
  }
  return grads;
}

double sgd_epoch(NetworkParams& params, const Eigen::MatrixXd& X,
                 const Eigen::VectorXd& targets,
                 const Eigen::VectorXd& sample_weights, int batch_size,
                 double lr, const std::vector<double>& dropout_rates,
                 Rng& rng) {
  const Eigen::Index n = X.rows();
  if (n == 0) throw DataError("sgd_epoch: empty data");
  if (targets.size() != n || sample_weights.size() != n) {
    throw DimensionError("sgd_epoch: target/weight length mismatch");
  }
  if (!(lr >= 0.0)) throw ValidationError("sgd_epoch: lr must be >= 0");
  if (batch_size < 1 || batch_size > n) {
    throw DimensionError("sgd_epoch: batch size out of range");
  }

  std::vector<Eigen::Index> order(n);
  std::iota(order.begin(), order.end(), 0);
  for (Eigen::Index i = n - 1; i > 0; --i) {
    std::swap(order[i], order[rng.below(static_cast<std::uint64_t>(i) + 1)]);
  }

  double loss_sum = 0.0;
  for (Eigen::Index start = 0; start < n; start += batch_size) {
    const Eigen::Index m = std::min<Eigen::Index>(batch_size, n - start);
    Eigen::MatrixXd xb(m, X.cols());
    Eigen::VectorXd tb(m), wb(m);
    for (Eigen::Index i = 0; i < m; ++i) {
      xb.row(i) = X.row(order[start + i]);
      tb(i) = targets(order[start + i]);
      wb(i) = sample_weights(order[start + i]);
    }
    const ForwardTrace trace = forward(params, xb, dropout_rates, rng, true);
    const Eigen::VectorXd resid = trace.outputs - tb;
    loss_sum += resid.array().square().matrix().dot(wb);

    const Eigen::VectorXd dloss = (2.0 / static_cast<double>(m)) * resid;
    const NetworkParams grads = backward(params, trace, dloss, wb);
    for (std::size_t l = 0; l < params.weights.size(); ++l) {
      params.weights[l] -= lr * grads.weights[l];
      params.biases[l] -= lr * grads.biases[l];
    }
  }
  const double mean_loss = loss_sum / static_cast<double>(n);
  if (!std::isfinite(mean_loss)) {
    throw ValidationError("sgd_epoch: non-finite loss");
  }
  return mean_loss;
}

StackedBatch stack(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, int J) {
  if (J < 1) throw DimensionError("stack: J must be >= 1");
  if (X.rows() != y.size()) throw DimensionError("stack: X/y length mismatch");
  StackedBatch out;
  out.copies = J;
  out.X.resize(X.rows() * J, X.cols());
  out.y.resize(y.size() * J);
  for (int j = 0; j < J; ++j) {
    out.X.middleRows(j * X.rows(), X.rows()) = X;
    out.y.segment(j * y.size(), y.size()) = y;
  }
  return out;
}

}  // namespace sda
