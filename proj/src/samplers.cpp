#include "sda/samplers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace sda {

double sample_inverse_gaussian(Rng& rng, double mu, double lam) {
  if (!(mu > 0.0) || !(lam > 0.0)) {
    throw ValidationError("inverse_gaussian: mu and lam must be > 0");
  }
  const double z = rng.standard_normal();
  const double y = z * z;
  const double muy = mu * y;
  double x = mu + mu * muy / (2.0 * lam) -
             mu / (2.0 * lam) * std::sqrt(4.0 * mu * lam * y + muy * muy);
  // Root can land at a tiny negative value in floating point.
  if (x <= 0.0) x = std::numeric_limits<double>::min();
  const double u = rng.uniform();
  if (u <= mu / (mu + x)) return x;
  return mu * mu / x;
}

double pg_em_weight(double z) {
  if (!std::isfinite(z)) throw ValidationError("pg_em_weight: non-finite z");
  const double az = std::fabs(z);
  if (az < 1e-4) {
    // tanh(z/2)/(2z) = 1/4 - z^2/48 + z^4/480 - ...
    const double z2 = z * z;
    return 0.25 - z2 / 48.0 + z2 * z2 / 480.0;
  }
  return std::tanh(0.5 * z) / (2.0 * z);
}

namespace {

// 15-point Kronrod nodes/weights with the embedded 7-point Gauss rule,
// on [-1, 1].
constexpr double kXgk[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769,
    0.741531185599394, 0.586087235467691, 0.405845151377397,
    0.207784955007898, 0.000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728};
constexpr double kWg[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119,
    0.417959183673469};

struct Panel {
  double value;
  double err;
};

Panel gk15(const std::function<double(double)>& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = f(c);
  double res_g = fc * kWg[3];
  double res_k = fc * kWgk[7];
  for (int i = 0; i < 7; ++i) {
    const double x = h * kXgk[i];
    const double fsum = f(c - x) + f(c + x);
    res_k += kWgk[i] * fsum;
    if (i % 2 == 1) res_g += kWg[i / 2] * fsum;
  }
  return {res_k * h, std::fabs((res_k - res_g) * h)};
}

void refine(const std::function<double(double)>& f, double a, double b,
            double tol, int depth, QuadResult& out) {
  const Panel p = gk15(f, a, b);
  if (p.err <= tol || depth <= 0) {
    out.value += p.value;
    out.err_estimate += p.err;
    if (p.err > tol) out.converged = false;
    return;
  }
  const double c = 0.5 * (a + b);
  refine(f, a, c, 0.5 * tol, depth - 1, out);
  refine(f, c, b, 0.5 * tol, depth - 1, out);
}

}  // namespace

QuadResult integrate_adaptive(const std::function<double(double)>& f,
                              double lo, double hi, double tol,
                              int max_depth) {
  QuadResult out;
  refine(f, lo, hi, tol, max_depth, out);
  return out;
}

QuadResult integrate_half_line(const std::function<double(double)>& f,
                               double tol, int max_depth) {
  auto g = [&f](double t) {
    if (t <= 0.0 || t >= 1.0 - 1e-12) return 0.0;
    const double u = t / (1.0 - t);
    const double jac = 2.0 * u / ((1.0 - t) * (1.0 - t));
    const double v = f(u * u) * jac;
    return std::isfinite(v) ? v : 0.0;
  };
  return integrate_adaptive(g, 0.0, 1.0, tol, max_depth);
}

namespace {

constexpr double kTwoPi = 6.283185307179586;

double relu_rhs(double x, double a, double c) {
  return std::exp(-2.0 * std::max(a * x, 0.0) / c) / a;
}

double check_fn(double x, double tau) {
  return 0.5 * std::fabs(x) + (tau - 0.5) * x;
}

}  // namespace

IdentityCheck verify_identity(const MixtureIdentity& id, double x,
                              double tol, int max_depth) {
  IdentityCheck out;
  const double a = id.a, b = id.b, c = id.c, tau = id.tau;
  switch (id.kind) {
    case IdentityKind::relu: {
      if (!(a > 0.0) || !(c > 0.0))
        throw ValidationError("relu identity: a, c must be > 0");
      auto f = [=](double lam) {
        const double d = x + a * lam;
        return std::exp(-d * d / (2.0 * c * lam)) / std::sqrt(kTwoPi * c * lam);
      };
      const QuadResult q = integrate_half_line(f, tol, max_depth);
      out.lhs = q.value;
      out.rhs = relu_rhs(x, a, c);
      out.converged = q.converged;
      break;
    }
    case IdentityKind::lasso: {
      if (!(c > 0.0)) throw ValidationError("lasso identity: c must be > 0");
      auto f = [=](double lam) {
        return std::exp(-x * x / (2.0 * c * lam) - 0.5 * lam) /
               std::sqrt(kTwoPi * c * lam);
      };
      const QuadResult q = integrate_half_line(f, tol, max_depth);
      out.lhs = q.value;
      out.rhs = std::exp(-std::fabs(x) / c) / c;
      out.converged = q.converged;
      break;
    }
    case IdentityKind::check: {
      if (!(c > 0.0) || !(tau > 0.0) || !(tau < 1.0))
        throw ValidationError("check identity: need c > 0 and tau in (0,1)");
      auto f = [=](double lam) {
        const double d = x + (2.0 * tau - 1.0) * lam;
        return std::exp(-d * d / (2.0 * c * lam) -
                        2.0 * tau * (1.0 - tau) * lam) /
               std::sqrt(kTwoPi * c * lam);
      };
      const QuadResult q = integrate_half_line(f, tol, max_depth);
      out.lhs = q.value;
      out.rhs = std::exp(-2.0 * check_fn(x, tau) / c) / c;
      out.converged = q.converged;
      break;
    }
    case IdentityKind::logit: {
      if (!(b > 0.0)) throw ValidationError("logit identity: b must be > 0");
      // x plays the role of psi; the PG(b,0) Laplace transform at psi^2/2 is
      // cosh^{-b}(psi/2).
      const double kappa = a - 0.5 * b;
      out.lhs = std::pow(2.0, -b) * std::exp(kappa * x) *
                std::pow(std::cosh(0.5 * x), -b);
      out.rhs = std::exp(a * x) / std::pow(1.0 + std::exp(x), b);
      break;
    }
  }
  out.abs_err = std::fabs(out.lhs - out.rhs);
  return out;
}

}  // namespace sda
