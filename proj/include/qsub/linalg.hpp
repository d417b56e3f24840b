#pragma once

// Small dense-vector helpers shared by every module. Vectors are plain
// std::vector<double>; mixed-operand calls validate dimensions.

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace qsub {

using Vec = std::vector<double>;

inline void require_same_dim(const Vec& a, const Vec& b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("vector dimension mismatch");
  }
}

inline double dot(const Vec& a, const Vec& b) {
  require_same_dim(a, b);
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm_sq(const Vec& a) { return dot(a, a); }

inline double norm(const Vec& a) { return std::sqrt(norm_sq(a)); }

inline Vec add(const Vec& a, const Vec& b) {
  require_same_dim(a, b);
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

inline Vec sub(const Vec& a, const Vec& b) {
  require_same_dim(a, b);
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

inline Vec scaled(const Vec& a, double t) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = t * a[i];
  return r;
}

inline double dist(const Vec& a, const Vec& b) { return norm(sub(a, b)); }

inline Vec unit(const Vec& a) {
  double n = norm(a);
  if (n == 0.0) throw std::invalid_argument("cannot normalize a zero vector");
  return scaled(a, 1.0 / n);
}

inline Vec zeros(std::size_t dim) { return Vec(dim, 0.0); }

inline Vec basis(std::size_t dim, std::size_t i) {
  Vec r(dim, 0.0);
  r.at(i) = 1.0;
  return r;
}

// pow with exact fast paths for the exponents this library leans on; plain
// std::pow otherwise.
inline double powr(double base, double expo) {
  if (expo == 1.0) return base;
  if (expo == 2.0) return base * base;
  if (expo == 0.5) return std::sqrt(base);
  return std::pow(base, expo);
}

}  // namespace qsub
