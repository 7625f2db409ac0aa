#pragma once

#include <Eigen/Dense>
#include <vector>

#include "sda/rng.hpp"

namespace sda {

// Dense feed-forward ReLU network with a scalar affine output layer.
//
// Layer convention: layer_sizes() = (p, h_1, ..., h_L, 1), input first.
// weights[l] is (in x out) so a batch stored row-wise maps through
// A * W + b.  Hidden layers apply ReLU, the final layer is affine.
struct NetworkParams {
  std::vector<Eigen::MatrixXd> weights;
  std::vector<Eigen::VectorXd> biases;

  int num_layers() const { return static_cast<int>(weights.size()); }
  int input_dim() const { return static_cast<int>(weights.front().rows()); }
  std::vector<int> layer_sizes() const;
  void validate() const;  // throws DimensionError / ValidationError
};

// Scaled uniform init, half-width sqrt(6/(fan_in+fan_out)); biases zero.
NetworkParams make_network(int input_dim, const std::vector<int>& hidden,
                           Rng& rng);

struct ForwardTrace {
  // activations[0] is the input batch; activations[l] feeds weights[l].
  std::vector<Eigen::MatrixXd> activations;
  std::vector<Eigen::MatrixXd> pre_activations;  // hidden layers only
  // Dropout masks hold 0 or 1/(1-rate); empty in eval mode.
  std::vector<Eigen::MatrixXd> dropout_masks;
  Eigen::VectorXd outputs;

  // Input to the final affine layer (post-activation of the last hidden
  // layer, or the raw input when there are no hidden layers).
  const Eigen::MatrixXd& top_layer_input() const { return activations.back(); }
};

ForwardTrace forward(const NetworkParams& params, const Eigen::MatrixXd& X,
                     const std::vector<double>& dropout_rates, Rng& rng,
                     bool train_mode);

// Eval-mode forward pass returning just the outputs.
Eigen::VectorXd predict(const NetworkParams& params, const Eigen::MatrixXd& X);

// Gradient of sum_i w_i * loss_i given d loss_i / d output_i.  The ReLU
// subgradient at 0 is taken as 0.  The result has the same shapes as params.
NetworkParams backward(const NetworkParams& params, const ForwardTrace& trace,
                       const Eigen::VectorXd& residual_grad,
                       const Eigen::VectorXd& sample_weights);

// One shuffled pass of mini-batch SGD on the weighted squared loss
//   (1/m) sum_{i in batch} w_i (f(x_i) - t_i)^2.
// Returns the mean per-sample weighted squared error over the epoch.
double sgd_epoch(NetworkParams& params, const Eigen::MatrixXd& X,
                 const Eigen::VectorXd& targets,
                 const Eigen::VectorXd& sample_weights, int batch_size,
                 double lr, const std::vector<double>& dropout_rates,
                 Rng& rng);

// J-fold block replication: block j of X (resp. y) is the original array.
struct StackedBatch {
  int copies = 1;
  Eigen::MatrixXd X;
  Eigen::VectorXd y;
};

StackedBatch stack(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, int J);

}  // namespace sda
