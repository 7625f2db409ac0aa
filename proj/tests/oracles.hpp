// Test-only oracles, independent of the library's sampling formulas.
#pragma once

#include <cmath>
#include <functional>

namespace oracles {

struct GridMoments {
  double mean = 0.0;
  double var = 0.0;
};

// Mean/variance of an unnormalized 1-D density evaluated on a regular grid.
inline GridMoments grid_posterior_moments(
    const std::function<double(double)>& log_density, double center,
    double halfwidth, double step) {
  double mass = 0.0, m1 = 0.0, m2 = 0.0;
  // Shift by the peak value so exp() stays in range.
  double peak = -1e300;
  for (double z = center - halfwidth; z <= center + halfwidth; z += step) {
    peak = std::max(peak, log_density(z));
  }
  for (double z = center - halfwidth; z <= center + halfwidth; z += step) {
    const double w = std::exp(log_density(z) - peak);
    mass += w;
    m1 += w * z;
    m2 += w * z * z;
  }
  GridMoments out;
  out.mean = m1 / mass;
  out.var = m2 / mass - out.mean * out.mean;
  return out;
}

// Log density of the Gaussian-regression Z0 conditional:
// y = w0 z + b0 + N(0, tau0^2), z ~ N(f, tauz^2).
inline std::function<double(double)> gaussian_z0_logdensity(
    double y, double f, double w0, double b0, double tau0, double tauz) {
  return [=](double z) {
    const double r0 = y - w0 * z - b0;
    const double rz = z - f;
    return -0.5 * r0 * r0 / (tau0 * tau0) - 0.5 * rz * rz / (tauz * tauz);
  };
}

// Log density of the SVM Z0 conditional with slack lambda:
// exponent -(1 + lambda - y z w0)^2 / (2 tau0^2 lambda) - (z-f)^2/(2 tauz^2).
inline std::function<double(double)> svm_z0_logdensity(
    double y, double f, double w0, double lambda, double tau0, double tauz) {
  return [=](double z) {
    const double r0 = 1.0 + lambda - y * z * w0;
    const double rz = z - f;
    return -0.5 * r0 * r0 / (tau0 * tau0 * lambda) -
           0.5 * rz * rz / (tauz * tauz);
  };
}

}  // namespace oracles
