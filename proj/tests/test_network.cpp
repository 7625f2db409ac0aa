#include "sda/network.hpp"

#include <cmath>
#include <doctest.h>
#include <vector>

#include "sda/errors.hpp"

using namespace sda;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

const std::vector<double> kNoDrop1{0.0};

// Total weighted squared loss in eval mode, for finite differences.
double eval_loss(const NetworkParams& params, const MatrixXd& X,
                 const VectorXd& t, const VectorXd& w) {
  const VectorXd f = predict(params, X);
  return ((f - t).array().square() * w.array()).sum();
}

}  // namespace

TEST_CASE("forward: identity hidden layer clamps negatives") {
  NetworkParams net;
  net.weights = {MatrixXd::Identity(2, 2), MatrixXd::Ones(2, 1)};
  net.biases = {VectorXd::Zero(2), VectorXd::Zero(1)};
  MatrixXd x(1, 2);
  x << 1.0, -2.0;
  Rng rng(0);
  const ForwardTrace t = forward(net, x, kNoDrop1, rng, false);
  CHECK(t.activations[1](0, 0) == 1.0);
  CHECK(t.activations[1](0, 1) == 0.0);
  CHECK(t.outputs(0) == 1.0);
}

TEST_CASE("forward: all-zero weights give zero output") {
  NetworkParams net;
  net.weights = {MatrixXd::Zero(3, 4), MatrixXd::Zero(4, 1)};
  net.biases = {VectorXd::Zero(4), VectorXd::Zero(1)};
  Rng rng(0);
  const ForwardTrace t =
      forward(net, MatrixXd::Random(5, 3), kNoDrop1, rng, false);
  CHECK(t.outputs.isZero());
}

TEST_CASE("forward: hand-evaluated two-layer composition") {
  // 1 -> 2 hidden -> 1; hidden weights (1, -1), biases (0.5, 0.5),
  // unit output weights.  x = 1 gives hidden (1.5, 0) and output 1.5.
  NetworkParams net;
  MatrixXd w_h(1, 2);
  w_h << 1.0, -1.0;
  VectorXd b_h(2);
  b_h << 0.5, 0.5;
  net.weights = {w_h, MatrixXd::Ones(2, 1)};
  net.biases = {b_h, VectorXd::Zero(1)};
  MatrixXd x(1, 1);
  x << 1.0;
  Rng rng(0);
  const ForwardTrace t = forward(net, x, kNoDrop1, rng, false);
  CHECK(t.activations[1](0, 0) == doctest::Approx(1.5));
  CHECK(t.activations[1](0, 1) == 0.0);
  CHECK(t.outputs(0) == doctest::Approx(1.5));
}

TEST_CASE("forward: validation errors") {
  Rng rng(0);
  NetworkParams net;
  net.weights = {MatrixXd::Ones(2, 1)};
  net.biases = {VectorXd::Zero(1)};
  CHECK_THROWS_AS(forward(net, MatrixXd::Ones(1, 3), {}, rng, false),
                  DimensionError);
  MatrixXd bad(1, 2);
  bad << 1.0, std::nan("");
  CHECK_THROWS_AS(forward(net, bad, {}, rng, false), ValidationError);
  CHECK_THROWS_AS(forward(net, MatrixXd::Ones(1, 2), {0.5}, rng, false),
                  DimensionError);
}

TEST_CASE("forward: rate-0 dropout in train mode equals eval mode") {
  Rng init(3);
  NetworkParams net = make_network(4, {8, 8}, init);
  const MatrixXd x = MatrixXd::Random(6, 4);
  Rng r1(9), r2(9);
  const ForwardTrace train = forward(net, x, {0.0, 0.0}, r1, true);
  const ForwardTrace eval = forward(net, x, {0.0, 0.0}, r2, false);
  CHECK(train.outputs == eval.outputs);
  CHECK(eval.outputs == predict(net, x));
}

TEST_CASE("forward: dropout keeps the eval-mode expectation via scaling") {
  Rng init(4);
  NetworkParams net = make_network(3, {64}, init);
  const MatrixXd x = MatrixXd::Ones(1, 3);
  const double eval_out = predict(net, x)(0);
  double sum = 0.0;
  const int reps = 4000;
  Rng rng(5);
  for (int i = 0; i < reps; ++i) {
    sum += forward(net, x, {0.4}, rng, true).outputs(0);
  }
  CHECK(sum / reps == doctest::Approx(eval_out).epsilon(0.1));
}

TEST_CASE("backward: zero residual gradient gives zero gradients") {
  Rng init(6);
  NetworkParams net = make_network(3, {5}, init);
  const MatrixXd x = MatrixXd::Random(4, 3);
  Rng rng(0);
  const ForwardTrace t = forward(net, x, kNoDrop1, rng, false);
  const NetworkParams g =
      backward(net, t, VectorXd::Zero(4), VectorXd::Ones(4));
  for (const auto& w : g.weights) CHECK(w.isZero());
  for (const auto& b : g.biases) CHECK(b.isZero());
}

TEST_CASE("backward: constant sample weights scale the gradient") {
  Rng init(7);
  NetworkParams net = make_network(2, {4}, init);
  const MatrixXd x = MatrixXd::Random(5, 2);
  Rng rng(0);
  const ForwardTrace t = forward(net, x, kNoDrop1, rng, false);
  const VectorXd resid = VectorXd::Random(5);
  const NetworkParams g1 =
      backward(net, t, resid, VectorXd::Ones(5));
  const NetworkParams g3 =
      backward(net, t, resid, VectorXd::Constant(5, 3.0));
  for (std::size_t l = 0; l < g1.weights.size(); ++l) {
    CHECK((g3.weights[l] - 3.0 * g1.weights[l]).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("backward matches central finite differences on random nets") {
  for (int trial = 0; trial < 50; ++trial) {
    Rng init(100 + trial);
    NetworkParams net = make_network(3, {4, 3}, init);
    MatrixXd x(6, 3);
    for (int i = 0; i < 6; ++i) {
      for (int j = 0; j < 3; ++j) {
        // Jitter inputs away from ReLU kinks.
        x(i, j) = init.normal(0.3, 1.0);
      }
    }
    VectorXd t(6), w(6);
    for (int i = 0; i < 6; ++i) {
      t(i) = init.normal(0.0, 1.0);
      w(i) = init.uniform() + 0.5;
    }
    Rng rng(0);
    const ForwardTrace trace = forward(net, x, {0.0, 0.0}, rng, false);
    const VectorXd resid = 2.0 * (trace.outputs - t);
    const NetworkParams grads = backward(net, trace, resid, w);

    const double h = 1e-5;
    double max_rel = 0.0;
    for (std::size_t l = 0; l < net.weights.size(); ++l) {
      for (Eigen::Index i = 0; i < net.weights[l].size(); ++i) {
        NetworkParams plus = net, minus = net;
        plus.weights[l].data()[i] += h;
        minus.weights[l].data()[i] -= h;
        const double fd =
            (eval_loss(plus, x, t, w) - eval_loss(minus, x, t, w)) / (2 * h);
        const double an = grads.weights[l].data()[i];
        const double rel =
            std::fabs(fd - an) / std::max(1.0, std::fabs(fd));
        max_rel = std::max(max_rel, rel);
      }
    }
    CHECK(max_rel < 1e-4);
  }
}

TEST_CASE("sgd_epoch: zero learning rate leaves parameters unchanged") {
  Rng init(8);
  NetworkParams net = make_network(2, {4}, init);
  const NetworkParams before = net;
  const MatrixXd x = MatrixXd::Random(10, 2);
  const VectorXd t = VectorXd::Random(10);
  Rng rng(1);
  sgd_epoch(net, x, t, VectorXd::Ones(10), 5, 0.0, kNoDrop1, rng);
  for (std::size_t l = 0; l < net.weights.size(); ++l) {
    CHECK(net.weights[l] == before.weights[l]);
  }
}

TEST_CASE("sgd_epoch: one full-batch step on a linear net is the exact "
          "gradient step") {
  NetworkParams net;
  net.weights = {MatrixXd::Constant(1, 1, 0.5)};
  net.biases = {VectorXd::Constant(1, 0.1)};
  MatrixXd x(3, 1);
  x << 1.0, 2.0, -1.0;
  VectorXd t(3);
  t << 2.0, 3.0, 0.0;
  const double lr = 0.01;

  // d/dw (1/n) sum (w x + b - t)^2 = (2/n) sum (w x + b - t) x
  double gw = 0.0, gb = 0.0;
  for (int i = 0; i < 3; ++i) {
    const double r = 0.5 * x(i, 0) + 0.1 - t(i);
    gw += 2.0 / 3.0 * r * x(i, 0);
    gb += 2.0 / 3.0 * r;
  }
  Rng rng(1);
  sgd_epoch(net, x, t, VectorXd::Ones(3), 3, lr, {}, rng);
  CHECK(net.weights[0](0, 0) == doctest::Approx(0.5 - lr * gw).epsilon(1e-12));
  CHECK(net.biases[0](0) == doctest::Approx(0.1 - lr * gb).epsilon(1e-12));
}

TEST_CASE("sgd_epoch: reproducible and finite on noisy data") {
  Rng init_a(9), init_b(9);
  NetworkParams a = make_network(5, {8}, init_a);
  NetworkParams b = make_network(5, {8}, init_b);
  const MatrixXd x = MatrixXd::Random(40, 5);
  const VectorXd t = VectorXd::Random(40) * 10.0;
  Rng ra(2), rb(2);
  const double la = sgd_epoch(a, x, t, VectorXd::Ones(40), 8, 1e-3,
                              kNoDrop1, ra);
  const double lb = sgd_epoch(b, x, t, VectorXd::Ones(40), 8, 1e-3,
                              kNoDrop1, rb);
  CHECK(la == lb);
  for (std::size_t l = 0; l < a.weights.size(); ++l) {
    CHECK(a.weights[l] == b.weights[l]);
    CHECK(a.weights[l].allFinite());
  }
  CHECK_THROWS_AS(sgd_epoch(a, MatrixXd(0, 5), VectorXd(0), VectorXd(0), 1,
                            1e-3, kNoDrop1, ra),
                  DataError);
}

TEST_CASE("stack: J = 1 is the identity") {
  const MatrixXd x = MatrixXd::Random(4, 2);
  const VectorXd y = VectorXd::Random(4);
  const StackedBatch s = stack(x, y, 1);
  CHECK(s.X == x);
  CHECK(s.y == y);
  CHECK_THROWS_AS(stack(x, y, 0), DimensionError);
}

TEST_CASE("stack: block layout and bit-exact slice recovery") {
  MatrixXd x(2, 1);
  x << 10.0, 20.0;
  VectorXd y(2);
  y << 1.0, 2.0;
  const StackedBatch s = stack(x, y, 3);
  REQUIRE(s.y.size() == 6);
  // Block layout (y1, y2) x 3.
  VectorXd expect(6);
  expect << 1.0, 2.0, 1.0, 2.0, 1.0, 2.0;
  CHECK(s.y == expect);
  for (int j = 0; j < 3; ++j) {
    CHECK(s.X.middleRows(2 * j, 2) == x);
    CHECK(s.y.segment(2 * j, 2) == y);
  }
}

TEST_CASE("stack: J = 10 yields stacked length 10n") {
  const MatrixXd x = MatrixXd::Random(7, 3);
  const VectorXd y = VectorXd::Random(7);
  const StackedBatch s = stack(x, y, 10);
  CHECK(s.X.rows() == 70);
  CHECK(s.y.size() == 70);
}
