#pragma once

// Deterministic random source. std::mt19937_64 is seeded explicitly and every
// derived draw is built from raw 64-bit outputs, so streams are reproducible
// across standard libraries (the std:: distributions make no such promise).

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>

#include "qsub/linalg.hpp"

namespace qsub {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  // Uniform draw in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) {
    if (!(lo <= hi)) throw std::invalid_argument("uniform: lo > hi");
    return lo + (hi - lo) * uniform();
  }

  // Standard normal via the polar method. No cached spare: one value per
  // call keeps the stream position independent of call parity.
  double normal() {
    for (;;) {
      double u = 2.0 * uniform() - 1.0;
      double v = 2.0 * uniform() - 1.0;
      double s = u * u + v * v;
      if (s > 0.0 && s < 1.0) {
        return u * std::sqrt(-2.0 * std::log(s) / s);
      }
    }
  }

  Vec gaussian_vector(std::size_t dim) {
    Vec r(dim);
    for (auto& x : r) x = normal();
    return r;
  }

  // Uniform direction on the unit sphere.
  Vec unit_vector(std::size_t dim) {
    if (dim == 0) throw std::invalid_argument("unit_vector: dim must be >= 1");
    for (;;) {
      Vec g = gaussian_vector(dim);
      double n = norm(g);
      if (n > 1e-12) return scaled(g, 1.0 / n);
    }
  }

  // Uniform point in the closed ball B(center, radius).
  Vec in_ball(const Vec& center, double radius) {
    if (radius < 0.0) throw std::invalid_argument("in_ball: negative radius");
    std::size_t n = center.size();
    Vec dir = unit_vector(n);
    double r = radius * std::pow(uniform(), 1.0 / static_cast<double>(n));
    return add(center, scaled(dir, r));
  }

  // Uniform point in the axis-aligned box [lower, upper].
  Vec in_box(const Vec& lower, const Vec& upper) {
    require_same_dim(lower, upper);
    Vec r(lower.size());
    for (std::size_t i = 0; i < r.size(); ++i) {
      r[i] = uniform(lower[i], upper[i]);
    }
    return r;
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace qsub
