#include "sda/samplers.hpp"

#include <cmath>
#include <doctest.h>
#include <vector>

using namespace sda;

TEST_CASE("normal draws are deterministic under a fixed seed") {
  Rng a(42), b(42);
  for (int i = 0; i < 10; ++i) {
    CHECK(a.normal(0.0, 1.0) == b.normal(0.0, 1.0));
  }
}

TEST_CASE("normal with tiny sigma collapses to the mean") {
  Rng rng(1);
  for (int i = 0; i < 100; ++i) {
    CHECK(rng.normal(3.5, 1e-12) == doctest::Approx(3.5).epsilon(1e-9));
  }
  CHECK_THROWS_AS(rng.normal(0.0, 0.0), ValidationError);
  CHECK_THROWS_AS(rng.normal(0.0, -1.0), ValidationError);
}

TEST_CASE("normal sample moments match N(2, 9)") {
  const int n = 100000;
  Rng rng(7);
  double sum = 0.0, sumsq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = rng.normal(2.0, 3.0);
    sum += x;
    sumsq += x * x;
  }
  const double mean = sum / n;
  const double var = sumsq / n - mean * mean;
  CHECK(std::fabs(mean - 2.0) < 4.0 * 3.0 / std::sqrt(n));
  CHECK(std::fabs(var - 9.0) < 4.0 * 9.0 * std::sqrt(2.0 / n));
}

TEST_CASE("sub-streams are independent of parent consumption") {
  Rng a(5), b(5);
  a.uniform();
  a.uniform();
  Rng sa = a.stream(3, 1);
  Rng sb = b.stream(3, 1);
  for (int i = 0; i < 5; ++i) CHECK(sa.uniform() == sb.uniform());
}

TEST_CASE("inverse Gaussian mean at (1.5, 2)") {
  const int n = 100000;
  Rng rng(11);
  double sum = 0.0;
  for (int i = 0; i < n; ++i) sum += sample_inverse_gaussian(rng, 1.5, 2.0);
  const double sd = std::sqrt(std::pow(1.5, 3) / 2.0);
  CHECK(std::fabs(sum / n - 1.5) < 4.0 * sd / std::sqrt(n));
}

TEST_CASE("inverse Gaussian reciprocal moment E[1/X] = 1/mu + 1/lam") {
  const int n = 100000;
  const double mu = 2.0, lam = 3.0;
  Rng rng(13);
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    sum += 1.0 / sample_inverse_gaussian(rng, mu, lam);
  }
  const double expect = 1.0 / mu + 1.0 / lam;  // 0.8333...
  const double sd = std::sqrt(1.0 / (mu * lam) + 2.0 / (lam * lam));
  CHECK(std::fabs(sum / n - expect) < 4.0 * sd / std::sqrt(n));
}

TEST_CASE("inverse Gaussian concentrates at mu for huge shape") {
  Rng rng(17);
  for (int i = 0; i < 200; ++i) {
    CHECK(std::fabs(sample_inverse_gaussian(rng, 1.0, 1e6) - 1.0) < 0.05);
  }
  CHECK_THROWS_AS(sample_inverse_gaussian(rng, -1.0, 1.0), ValidationError);
  CHECK_THROWS_AS(sample_inverse_gaussian(rng, 1.0, 0.0), ValidationError);
}

TEST_CASE("inverse Gaussian is deterministic under a fixed seed") {
  Rng a(23), b(23);
  for (int i = 0; i < 10; ++i) {
    CHECK(sample_inverse_gaussian(a, 0.7, 1.3) ==
          sample_inverse_gaussian(b, 0.7, 1.3));
  }
}

TEST_CASE("pg_em_weight point values") {
  CHECK(pg_em_weight(0.0) == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(pg_em_weight(1.0) ==
        doctest::Approx(std::tanh(0.5) / 2.0).epsilon(1e-12));
  CHECK(pg_em_weight(-3.0) == pg_em_weight(3.0));
}

TEST_CASE("pg_em_weight matches tanh form, decreasing, range (0, 1/4]") {
  double prev = 0.25 + 1e-15;
  for (double az = 1e-3; az <= 30.0; az *= 1.15) {
    const double w = pg_em_weight(az);
    CHECK(std::fabs(w - std::tanh(az / 2.0) / (2.0 * az)) < 1e-12);
    CHECK(w > 0.0);
    CHECK(w <= 0.25);
    CHECK(w < prev);
    prev = w;
  }
}

TEST_CASE("relu identity at x = 0 reduces to 1/a") {
  MixtureIdentity id{IdentityKind::relu, 2.0, 1.0, 1.0, 0.5};
  const IdentityCheck r = verify_identity(id, 0.0);
  CHECK(r.lhs == doctest::Approx(0.5).epsilon(1e-8));
  CHECK(r.abs_err < 1e-8);
}

TEST_CASE("relu identity over the parameter grid") {
  for (double a : {0.5, 1.0, 2.0}) {
    for (double c : {0.5, 1.0, 2.0}) {
      MixtureIdentity id{IdentityKind::relu, a, 1.0, c, 0.5};
      for (double x = -3.0; x <= 3.0 + 1e-9; x += 0.5) {
        CHECK(verify_identity(id, x).abs_err < 1e-6);
      }
    }
  }
}

TEST_CASE("lasso identity at c = 1") {
  MixtureIdentity id{IdentityKind::lasso, 1.0, 1.0, 1.0, 0.5};
  const IdentityCheck r = verify_identity(id, 1.3);
  CHECK(r.lhs == doctest::Approx(std::exp(-1.3)).epsilon(1e-7));
  CHECK(r.abs_err < 1e-6);
}

TEST_CASE("check identity at c = 1 over tau grid") {
  for (double tau : {0.25, 0.5, 0.9}) {
    MixtureIdentity id{IdentityKind::check, 1.0, 1.0, 1.0, tau};
    for (double x = -3.0; x <= 3.0 + 1e-9; x += 0.5) {
      CHECK(verify_identity(id, x).abs_err < 1e-6);
    }
  }
}

TEST_CASE("logit identity is exact through the PG Laplace transform") {
  {
    MixtureIdentity id{IdentityKind::logit, 1.0, 2.0, 1.0, 0.5};
    CHECK(verify_identity(id, 0.7).abs_err < 1e-14);
  }
  for (double a : {0.5, 1.0, 2.0}) {
    for (double b : {0.5, 1.0, 2.0}) {
      MixtureIdentity id{IdentityKind::logit, a, b, 1.0, 0.5};
      for (double psi = -4.0; psi <= 4.0 + 1e-9; psi += 0.5) {
        CHECK(verify_identity(id, psi).abs_err < 1e-12);
      }
    }
  }
}

TEST_CASE("identity parameter validation") {
  CHECK_THROWS_AS(
      verify_identity({IdentityKind::relu, -1.0, 1.0, 1.0, 0.5}, 0.0),
      ValidationError);
  CHECK_THROWS_AS(
      verify_identity({IdentityKind::check, 1.0, 1.0, 1.0, 1.5}, 0.0),
      ValidationError);
  CHECK_THROWS_AS(
      verify_identity({IdentityKind::logit, 1.0, 0.0, 1.0, 0.5}, 0.0),
      ValidationError);
}
