#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "sda/errors.hpp"

namespace sda {

// Seeded generator with derivable sub-streams.  Sub-streams are keyed off the
// original seed (not the engine state), so stream(epoch, j) is the same
// whether or not draws were consumed from the parent in between.  Normal
// variates use a non-caching Box-Muller so the draw sequence is a pure
// function of the uniform sequence, which the standard pins down for
// mt19937_64.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), engine_(mix(seed)) {}

  std::uint64_t seed() const { return seed_; }

  // Independent sub-stream keyed by (a, b).
  Rng stream(std::uint64_t a, std::uint64_t b = 0) const {
    return Rng(mix(mix(seed_ ^ mix(a + 1)) ^ mix(b + 0x9e3779b97f4a7c15ULL)));
  }

  // Uniform on [0, 1).
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  // Uniform on (0, 1].
  double uniform_pos() { return 1.0 - uniform(); }

  double normal(double mu, double sigma) {
    if (!(sigma > 0.0)) throw ValidationError("normal: sigma must be > 0");
    return mu + sigma * standard_normal();
  }

  double standard_normal() {
    const double u1 = uniform_pos();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
  }

  // Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) {
    // Rejection on the top multiple of n keeps the result exact.
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % n;
  }

 private:
  static std::uint64_t mix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  }

  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace sda
