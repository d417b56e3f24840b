#pragma once

// Closed convex feasible sets with exact projections: whole space, box, ball,
// halfspace. Every operation that distinguishes interior from boundary takes
// an explicit tolerance; kBoundaryTol is the library-wide default.

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <variant>

#include "qsub/linalg.hpp"
#include "qsub/rng.hpp"

namespace qsub {

inline constexpr double kBoundaryTol = 1e-9;

struct WholeSpace {
  std::size_t dim = 0;
};

struct Box {
  Vec lower;
  Vec upper;
};

struct Ball {
  Vec center;
  double radius = 0.0;
};

// { x : <normal, x> <= offset }
struct Halfspace {
  Vec normal;
  double offset = 0.0;
};

class FeasibleSet {
 public:
  static FeasibleSet whole_space(std::size_t dim) {
    if (dim == 0) throw std::invalid_argument("whole_space: dim must be >= 1");
    return FeasibleSet(WholeSpace{dim});
  }

  static FeasibleSet box(Vec lower, Vec upper) {
    require_same_dim(lower, upper);
    if (lower.empty()) throw std::invalid_argument("box: dim must be >= 1");
    for (std::size_t i = 0; i < lower.size(); ++i) {
      if (!(lower[i] <= upper[i])) {
        throw std::invalid_argument("box: lower[" + std::to_string(i) +
                                    "] exceeds upper bound");
      }
    }
    return FeasibleSet(Box{std::move(lower), std::move(upper)});
  }

  // Single point, represented as a degenerate box.
  static FeasibleSet point(Vec p) {
    if (p.empty()) throw std::invalid_argument("point: dim must be >= 1");
    return FeasibleSet(Box{p, p});
  }

  static FeasibleSet ball(Vec center, double radius) {
    if (center.empty()) throw std::invalid_argument("ball: dim must be >= 1");
    if (!(radius > 0.0)) throw std::invalid_argument("ball: radius must be positive");
    return FeasibleSet(Ball{std::move(center), radius});
  }

  static FeasibleSet halfspace(Vec normal, double offset) {
    if (norm(normal) == 0.0) {
      throw std::invalid_argument("halfspace: normal must be nonzero");
    }
    return FeasibleSet(Halfspace{std::move(normal), offset});
  }

  std::size_t dim() const {
    if (auto* w = std::get_if<WholeSpace>(&rep_)) return w->dim;
    if (auto* b = std::get_if<Box>(&rep_)) return b->lower.size();
    if (auto* s = std::get_if<Ball>(&rep_)) return s->center.size();
    return std::get<Halfspace>(rep_).normal.size();
  }

  template <class T>
  bool is() const {
    return std::holds_alternative<T>(rep_);
  }

  template <class T>
  const T& as() const {
    return std::get<T>(rep_);
  }

 private:
  template <class T>
  explicit FeasibleSet(T rep) : rep_(std::move(rep)) {}

  std::variant<WholeSpace, Box, Ball, Halfspace> rep_;
};

inline Vec project(const FeasibleSet& set, const Vec& x) {
  if (x.size() != set.dim()) {
    throw std::invalid_argument("project: point dimension mismatch");
  }
  if (set.is<WholeSpace>()) return x;
  if (set.is<Box>()) {
    const auto& b = set.as<Box>();
    Vec r(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
      r[i] = std::min(std::max(x[i], b.lower[i]), b.upper[i]);
    }
    return r;
  }
  if (set.is<Ball>()) {
    const auto& s = set.as<Ball>();
    Vec d = sub(x, s.center);
    double n = norm(d);
    if (n <= s.radius) return x;
    return add(s.center, scaled(d, s.radius / n));
  }
  const auto& h = set.as<Halfspace>();
  double slack = dot(h.normal, x) - h.offset;
  if (slack <= 0.0) return x;
  return sub(x, scaled(h.normal, slack / norm_sq(h.normal)));
}

inline double distance(const FeasibleSet& set, const Vec& x) {
  return dist(x, project(set, x));
}

inline bool contains(const FeasibleSet& set, const Vec& x,
                     double tol = kBoundaryTol) {
  return distance(set, x) <= tol;
}

// True when x lies in the set with every constraint slack by more than tol.
// Throws when x is not in the set at all.
inline bool is_interior(const FeasibleSet& set, const Vec& x,
                        double tol = kBoundaryTol) {
  if (!contains(set, x, tol)) {
    throw std::invalid_argument("is_interior: point is not in the set");
  }
  if (set.is<WholeSpace>()) return true;
  if (set.is<Box>()) {
    const auto& b = set.as<Box>();
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (x[i] - b.lower[i] <= tol || b.upper[i] - x[i] <= tol) return false;
    }
    return true;
  }
  if (set.is<Ball>()) {
    const auto& s = set.as<Ball>();
    return s.radius - dist(x, s.center) > tol;
  }
  const auto& h = set.as<Halfspace>();
  return (h.offset - dot(h.normal, x)) / norm(h.normal) > tol;
}

// Unit outward normal at a boundary point; the zero vector when x is
// interior. For a box with several active faces the normal averages the
// active coordinate directions and renormalizes.
inline Vec unit_normal(const FeasibleSet& set, const Vec& x,
                       double tol = kBoundaryTol) {
  if (is_interior(set, x, tol)) return zeros(x.size());
  if (set.is<Box>()) {
    const auto& b = set.as<Box>();
    Vec n = zeros(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
      bool at_low = x[i] - b.lower[i] <= tol;
      bool at_high = b.upper[i] - x[i] <= tol;
      if (at_low && at_high) {
        n[i] = 1.0;  // pinched coordinate: either sign is a valid normal
      } else if (at_high) {
        n[i] = 1.0;
      } else if (at_low) {
        n[i] = -1.0;
      }
    }
    double nn = norm(n);
    if (nn == 0.0) return zeros(x.size());  // unreachable given !interior
    return scaled(n, 1.0 / nn);
  }
  if (set.is<Ball>()) {
    const auto& s = set.as<Ball>();
    Vec d = sub(x, s.center);
    if (norm(d) == 0.0) return basis(x.size(), 0);  // degenerate tiny ball
    return unit(d);
  }
  const auto& h = set.as<Halfspace>();
  return unit(h.normal);
}

// Draw a point of the set, uniformly where the set is bounded. Unbounded
// sets sample from the cube hint +- radius (halfspaces by rejection, with a
// projection fallback so the call always succeeds).
inline Vec sample_point(const FeasibleSet& set, Rng& rng, const Vec& hint,
                        double radius) {
  if (hint.size() != set.dim()) {
    throw std::invalid_argument("sample_point: hint dimension mismatch");
  }
  if (!(radius > 0.0)) {
    throw std::invalid_argument("sample_point: radius must be positive");
  }
  if (set.is<Box>()) {
    const auto& b = set.as<Box>();
    return rng.in_box(b.lower, b.upper);
  }
  if (set.is<Ball>()) {
    const auto& s = set.as<Ball>();
    return rng.in_ball(s.center, s.radius);
  }
  Vec lo(hint.size()), hi(hint.size());
  for (std::size_t i = 0; i < hint.size(); ++i) {
    lo[i] = hint[i] - radius;
    hi[i] = hint[i] + radius;
  }
  if (set.is<WholeSpace>()) return rng.in_box(lo, hi);
  for (int attempt = 0; attempt < 200; ++attempt) {
    Vec y = rng.in_box(lo, hi);
    if (contains(set, y)) return y;
  }
  return project(set, rng.in_box(lo, hi));
}

// sup over the set of the Euclidean norm; +inf for unbounded sets.
inline double support_norm(const FeasibleSet& set) {
  if (set.is<Box>()) {
    const auto& b = set.as<Box>();
    double s = 0.0;
    for (std::size_t i = 0; i < b.lower.size(); ++i) {
      double m = std::max(std::abs(b.lower[i]), std::abs(b.upper[i]));
      s += m * m;
    }
    return std::sqrt(s);
  }
  if (set.is<Ball>()) {
    const auto& s = set.as<Ball>();
    return norm(s.center) + s.radius;
  }
  return std::numeric_limits<double>::infinity();
}

}  // namespace qsub
