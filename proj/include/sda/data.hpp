#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "sda/rng.hpp"

namespace sda {

struct Dataset {
  enum class Kind { regression, binary };

  Eigen::MatrixXd X;
  Eigen::VectorXd y;  // real-valued, or +-1 for binary
  Kind kind = Kind::regression;
  std::vector<int> train_idx;
  std::vector<int> test_idx;

  Eigen::MatrixXd train_X() const { return rows(train_idx); }
  Eigen::MatrixXd test_X() const { return rows(test_idx); }
  Eigen::VectorXd train_y() const { return entries(train_idx); }
  Eigen::VectorXd test_y() const { return entries(test_idx); }

  void validate() const;

 private:
  Eigen::MatrixXd rows(const std::vector<int>& idx) const;
  Eigen::VectorXd entries(const std::vector<int>& idx) const;
};

// Friedman's benchmark surface
//   y = 10 sin(pi x1 x2) + 20 (x3 - 0.5)^2 + 10 x4 + 5 x5
// evaluated on the first five coordinates of x.
double friedman_response(const Eigen::RowVectorXd& x);

// Samples the benchmark with inputs U(0,1) i.i.d. and N(0, sigma^2) noise;
// coordinates beyond the fifth are pure noise features.
Dataset gen_friedman(int n, int p, double sigma, Rng& rng);

// Two isotropic Gaussian blobs labeled +-1, centers at +-center along each
// coordinate.
Dataset gen_blobs(int n, double center, double sd, Rng& rng);

// Seeded permutation split, floor(n * train_frac) training rows.
void split_dataset(Dataset& ds, double train_frac, Rng& rng);

// IDX (big-endian) containers as used by the MNIST distribution.
struct IdxImages {
  int count = 0, rows = 0, cols = 0;
  std::vector<std::uint8_t> pixels;  // count * rows * cols
};

IdxImages load_idx_images(const std::string& path);
std::vector<std::uint8_t> load_idx_labels(const std::string& path);

// Keeps digits {a, b} only, flattens and scales pixels to [0,1];
// digit_a -> +1, digit_b -> -1.
Dataset filter_binary(const IdxImages& images,
                      const std::vector<std::uint8_t>& labels, int digit_a,
                      int digit_b);

}  // namespace sda
