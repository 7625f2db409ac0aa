#pragma once

#include <functional>

#include "sda/rng.hpp"

namespace sda {

// Inverse-Gaussian IG(mu, lam) variate with mean mu and shape lam, by the
// Michael-Schucany-Haas root-selection method.  E[X] = mu,
// E[1/X] = 1/mu + 1/lam, Var[X] = mu^3 / lam.
double sample_inverse_gaussian(Rng& rng, double mu, double lam);

// Conditional expectation of a PG(1, z) variable:
//   (sigmoid(z) - 1/2) / z  ==  tanh(z/2) / (2z),
// extended through the removable singularity at z = 0 (value 1/4).
// Even in z, strictly positive, bounded above by 1/4.
double pg_em_weight(double z);

// Normal scale-mixture identities, each pairing a mixing integral over the
// latent scale with a closed-form loss kernel.
enum class IdentityKind { relu, lasso, check, logit };

struct MixtureIdentity {
  IdentityKind kind;
  double a = 1.0;    // relu slope; logit numerator exponent
  double b = 1.0;    // logit denominator exponent
  double c = 1.0;    // scale (relu, lasso, check)
  double tau = 0.5;  // check-loss quantile, in (0,1)
};

struct IdentityCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  double abs_err = 0.0;
  bool converged = true;  // false when quadrature hit its subdivision cap
};

// Evaluates both sides of the identity at point x (for the logit kind x is
// the log-odds argument psi).  The relu/lasso/check mixing integrals are done
// by adaptive Gauss-Kronrod quadrature over the latent scale; the logit row
// uses the closed-form Polya-Gamma Laplace transform cosh^{-b}(psi/2).
IdentityCheck verify_identity(const MixtureIdentity& id, double x,
                              double tol = 1e-9, int max_depth = 20);

struct QuadResult {
  double value = 0.0;
  double err_estimate = 0.0;
  bool converged = true;
};

// Adaptive 15-point Gauss-Kronrod quadrature on [lo, hi].
QuadResult integrate_adaptive(const std::function<double(double)>& f,
                              double lo, double hi, double tol,
                              int max_depth);

// Integral of f over (0, inf), substituting lam = (t/(1-t))^2 so the
// lam^{-1/2} endpoint behavior of the mixture integrands becomes smooth.
QuadResult integrate_half_line(const std::function<double(double)>& f,
                               double tol, int max_depth);

}  // namespace sda
