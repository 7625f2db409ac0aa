#include "sda/data.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>

#include "sda/errors.hpp"

namespace sda {

void Dataset::validate() const {
  if (X.rows() != y.size()) throw DataError("dataset: X/y length mismatch");
  if (!X.allFinite() || !y.allFinite()) {
    throw DataError("dataset: non-finite values");
  }
  if (kind == Kind::binary) {
    for (Eigen::Index i = 0; i < y.size(); ++i) {
      if (y(i) != 1.0 && y(i) != -1.0) {
        throw DataError("dataset: binary labels must be +-1");
      }
    }
  }
  if (train_idx.empty() || test_idx.empty()) {
    throw DataError("dataset: missing train/test split");
  }
  std::vector<char> seen(X.rows(), 0);
  for (int i : train_idx) {
    if (i < 0 || i >= X.rows() || seen[i]++) {
      throw DataError("dataset: bad train index");
    }
  }
  for (int i : test_idx) {
    if (i < 0 || i >= X.rows() || seen[i]++) {
      throw DataError("dataset: bad test index");
    }
  }
  if (static_cast<Eigen::Index>(train_idx.size() + test_idx.size()) !=
      X.rows()) {
    throw DataError("dataset: split is not exhaustive");
  }
}

Eigen::MatrixXd Dataset::rows(const std::vector<int>& idx) const {
  Eigen::MatrixXd out(idx.size(), X.cols());
  for (std::size_t i = 0; i < idx.size(); ++i) out.row(i) = X.row(idx[i]);
  return out;
}

Eigen::VectorXd Dataset::entries(const std::vector<int>& idx) const {
  Eigen::VectorXd out(idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i) out(i) = y(idx[i]);
  return out;
}

double friedman_response(const Eigen::RowVectorXd& x) {
  if (x.size() < 5) throw DataError("friedman_response: needs p >= 5");
  constexpr double kPi = 3.141592653589793;
  return 10.0 * std::sin(kPi * x(0) * x(1)) +
         20.0 * (x(2) - 0.5) * (x(2) - 0.5) + 10.0 * x(3) + 5.0 * x(4);
}

Dataset gen_friedman(int n, int p, double sigma, Rng& rng) {
  if (p < 5) throw DataError("gen_friedman: needs p >= 5");
  if (n < 1) throw DataError("gen_friedman: needs n >= 1");
  if (sigma < 0.0) throw DataError("gen_friedman: sigma must be >= 0");
  Dataset ds;
  ds.kind = Dataset::Kind::regression;
  ds.X.resize(n, p);
  ds.y.resize(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < p; ++j) ds.X(i, j) = rng.uniform();
    ds.y(i) = friedman_response(ds.X.row(i));
    if (sigma > 0.0) ds.y(i) += rng.normal(0.0, sigma);
  }
  return ds;
}

Dataset gen_blobs(int n, double center, double sd, Rng& rng) {
  if (n < 2) throw DataError("gen_blobs: needs n >= 2");
  if (!(sd > 0.0)) throw DataError("gen_blobs: sd must be > 0");
  Dataset ds;
  ds.kind = Dataset::Kind::binary;
  ds.X.resize(n, 2);
  ds.y.resize(n);
  for (int i = 0; i < n; ++i) {
    const double label = i % 2 == 0 ? 1.0 : -1.0;
    ds.y(i) = label;
    ds.X(i, 0) = rng.normal(label * center, sd);
    ds.X(i, 1) = rng.normal(label * center, sd);
  }
  return ds;
}

void split_dataset(Dataset& ds, double train_frac, Rng& rng) {
  const int n = static_cast<int>(ds.X.rows());
  if (!(train_frac > 0.0) || !(train_frac < 1.0)) {
    throw DataError("split_dataset: train_frac must be in (0,1)");
  }
  const int n_train = static_cast<int>(n * train_frac);
  if (n_train < 1 || n_train >= n) {
    throw DataError("split_dataset: empty train or test side");
  }
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  for (int i = n - 1; i > 0; --i) {
    std::swap(perm[i], perm[rng.below(static_cast<std::uint64_t>(i) + 1)]);
  }
  ds.train_idx.assign(perm.begin(), perm.begin() + n_train);
  ds.test_idx.assign(perm.begin() + n_train, perm.end());
}

namespace {

std::uint32_t read_be32(std::ifstream& in, const std::string& path) {
  unsigned char buf[4];
  if (!in.read(reinterpret_cast<char*>(buf), 4)) {
    throw DataError("truncated IDX file: " + path);
  }
  return (static_cast<std::uint32_t>(buf[0]) << 24) |
         (static_cast<std::uint32_t>(buf[1]) << 16) |
         (static_cast<std::uint32_t>(buf[2]) << 8) |
         static_cast<std::uint32_t>(buf[3]);
}

}  // namespace

IdxImages load_idx_images(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path);
  if (read_be32(in, path) != 0x00000803u) {
    throw DataError("bad image magic in " + path);
  }
  IdxImages out;
  out.count = static_cast<int>(read_be32(in, path));
  out.rows = static_cast<int>(read_be32(in, path));
  out.cols = static_cast<int>(read_be32(in, path));
  const std::size_t total = static_cast<std::size_t>(out.count) * out.rows *
                            static_cast<std::size_t>(out.cols);
  out.pixels.resize(total);
  if (!in.read(reinterpret_cast<char*>(out.pixels.data()),
               static_cast<std::streamsize>(total))) {
    throw DataError("truncated IDX file: " + path);
  }
  return out;
}

std::vector<std::uint8_t> load_idx_labels(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path);
  if (read_be32(in, path) != 0x00000801u) {
    throw DataError("bad label magic in " + path);
  }
  const std::uint32_t count = read_be32(in, path);
  std::vector<std::uint8_t> labels(count);
  if (!in.read(reinterpret_cast<char*>(labels.data()), count)) {
    throw DataError("truncated IDX file: " + path);
  }
  return labels;
}

Dataset filter_binary(const IdxImages& images,
                      const std::vector<std::uint8_t>& labels, int digit_a,
                      int digit_b) {
  if (static_cast<std::size_t>(images.count) != labels.size()) {
    throw DataError("image/label counts differ");
  }
  const int dim = images.rows * images.cols;
  std::vector<int> keep;
  for (int i = 0; i < images.count; ++i) {
    if (labels[i] == digit_a || labels[i] == digit_b) keep.push_back(i);
  }
  if (keep.empty()) throw DataError("digit pair absent from labels");
  Dataset ds;
  ds.kind = Dataset::Kind::binary;
  ds.X.resize(keep.size(), dim);
  ds.y.resize(keep.size());
  for (std::size_t r = 0; r < keep.size(); ++r) {
    const std::uint8_t* px =
        images.pixels.data() + static_cast<std::size_t>(keep[r]) * dim;
    for (int j = 0; j < dim; ++j) ds.X(r, j) = px[j] / 255.0;
    ds.y(r) = labels[keep[r]] == digit_a ? 1.0 : -1.0;
  }
  return ds;
}

}  // namespace sda
