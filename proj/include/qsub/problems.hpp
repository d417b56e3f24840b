#pragma once

// Objective families, certificate metadata, and subgradient-style oracles.
//
// Every objective here is quasi-convex: its strict sublevel sets are convex
// (balls for the radial families, halfspaces for the linear-fractional one),
// which is exactly what the oracles exploit to produce unit normals in
// closed form.

#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "qsub/linalg.hpp"
#include "qsub/rng.hpp"
#include "qsub/sets.hpp"

namespace qsub {

// f(x) = modulus * ||x - center||^exponent, exponent in (0, 1].
struct PowerNorm {
  Vec center;
  double exponent = 1.0;
  double modulus = 1.0;
};

// f(x) = r^inner_exponent for r <= 1, r^outer_exponent for r > 1, where
// r = ||x - center||. Continuous at r = 1; the two branches let the growth
// order near the minimizer differ from the envelope order far away.
struct PiecewisePower {
  Vec center;
  double outer_exponent = 1.0;
  double inner_exponent = 1.0;
};

// f(x) = (<num_coeff, x> + num_offset) / (<den_coeff, x> + den_offset),
// defined where the denominator is positive.
struct LinearFractional {
  Vec num_coeff;
  double num_offset = 0.0;
  Vec den_coeff;
  double den_offset = 1.0;
};

class Objective {
 public:
  explicit Objective(PowerNorm f) : rep_(std::move(f)) {}
  explicit Objective(PiecewisePower f) : rep_(std::move(f)) {}
  explicit Objective(LinearFractional f) : rep_(std::move(f)) {}

  std::size_t dim() const {
    if (auto* p = std::get_if<PowerNorm>(&rep_)) return p->center.size();
    if (auto* p = std::get_if<PiecewisePower>(&rep_)) return p->center.size();
    return std::get<LinearFractional>(rep_).num_coeff.size();
  }

  bool radial() const { return !std::holds_alternative<LinearFractional>(rep_); }

  bool coercive() const { return radial(); }

  const Vec& center() const {
    if (auto* p = std::get_if<PowerNorm>(&rep_)) return p->center;
    if (auto* p = std::get_if<PiecewisePower>(&rep_)) return p->center;
    throw std::logic_error("center: objective is not radial");
  }

  double value(const Vec& x) const {
    if (x.size() != dim()) {
      throw std::invalid_argument("value: point dimension mismatch");
    }
    if (auto* p = std::get_if<PowerNorm>(&rep_)) {
      return p->modulus * powr(dist(x, p->center), p->exponent);
    }
    if (auto* p = std::get_if<PiecewisePower>(&rep_)) {
      double r = dist(x, p->center);
      return r <= 1.0 ? powr(r, p->inner_exponent) : powr(r, p->outer_exponent);
    }
    const auto& f = std::get<LinearFractional>(rep_);
    double den = dot(f.den_coeff, x) + f.den_offset;
    if (den <= 0.0) {
      throw std::domain_error("value: denominator is not positive at this point");
    }
    return (dot(f.num_coeff, x) + f.num_offset) / den;
  }

  // Radius of the sublevel set {f <= t} around the center. Radial only.
  double sublevel_radius(double t) const {
    if (t <= 0.0) return 0.0;
    if (auto* p = std::get_if<PowerNorm>(&rep_)) {
      return powr(t / p->modulus, 1.0 / p->exponent);
    }
    if (auto* p = std::get_if<PiecewisePower>(&rep_)) {
      return t <= 1.0 ? powr(t, 1.0 / p->inner_exponent)
                      : powr(t, 1.0 / p->outer_exponent);
    }
    throw std::logic_error("sublevel_radius: objective is not radial");
  }

  double denominator(const Vec& x) const {
    if (auto* f = std::get_if<LinearFractional>(&rep_)) {
      return dot(f->den_coeff, x) + f->den_offset;
    }
    throw std::logic_error("denominator: objective is not linear-fractional");
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
  std::variant<PowerNorm, PiecewisePower, LinearFractional> rep_;
};

// f - f_min <= modulus * dist(x, argmin)^order near the optimal set.
struct HolderCertificate {
  double order = 1.0;    // in (0, 1]
  double modulus = 1.0;  // positive
};

// f - f_min >= modulus * dist(x, argmin)^order on B(0, radius) intersected
// with the feasible set.
struct SharpCertificate {
  double order = 1.0;
  double modulus = 1.0;
  double radius = 1.0;
};

struct ProblemInstance {
  std::string name;
  Objective objective;
  FeasibleSet feasible;
  double optimal_value = 0.0;
  FeasibleSet optimal_set;
  HolderCertificate holder;
  std::optional<SharpCertificate> sharp;
};

inline double value(const ProblemInstance& pb, const Vec& x) {
  return pb.objective.value(x);
}

inline double gap(const ProblemInstance& pb, const Vec& x) {
  return pb.objective.value(x) - pb.optimal_value;
}

inline double distance_to_optimum(const ProblemInstance& pb, const Vec& x) {
  return distance(pb.optimal_set, x);
}

// Unit normal of the strict sublevel set at x: the direction that makes a
// nonpositive inner product with every strictly better point. At a global
// minimizer the strict sublevel set is empty and any unit vector qualifies;
// the first basis vector is the deterministic pick.
inline Vec quasi_subgradient(const ProblemInstance& pb, const Vec& x) {
  const Objective& f = pb.objective;
  if (f.radial()) {
    Vec d = sub(x, f.center());
    double r = norm(d);
    if (r == 0.0) return basis(x.size(), 0);
    return scaled(d, 1.0 / r);
  }
  const auto& lf = f.as<LinearFractional>();
  double den = f.denominator(x);
  if (den <= 0.0) {
    throw std::domain_error("quasi_subgradient: point outside the domain");
  }
  double num = dot(lf.num_coeff, x) + lf.num_offset;
  // den * num_coeff - num * den_coeff is an (unnormalized) normal of the
  // halfspace {y : f(y) < f(x)}.
  Vec g = sub(scaled(lf.num_coeff, den), scaled(lf.den_coeff, num));
  double n = norm(g);
  if (n <= 1e-14) return basis(x.size(), 0);
  return scaled(g, 1.0 / n);
}

// Unit normal of the relaxed sublevel set {y : f(y) < f(x) - eps}. tilt = 0
// returns the most central admissible direction, tilt = 1 an extreme ray of
// the admissible cone; intermediate values interpolate the angle. The
// rotation plane is seeded by rng.
inline Vec eps_quasi_subgradient(const ProblemInstance& pb, const Vec& x,
                                 double eps, double tilt, Rng& rng) {
  if (!(eps > 0.0)) {
    throw std::invalid_argument("eps_quasi_subgradient: eps must be positive");
  }
  if (!(tilt >= 0.0 && tilt <= 1.0)) {
    throw std::invalid_argument("eps_quasi_subgradient: tilt must lie in [0, 1]");
  }
  const Objective& f = pb.objective;
  double t = f.value(x) - eps;
  if (t <= pb.optimal_value) {
    // The relaxed sublevel set is empty; every unit vector is admissible.
    return quasi_subgradient(pb, x);
  }
  if (f.radial()) {
    Vec d = sub(x, f.center());
    double R = norm(d);
    Vec u = scaled(d, 1.0 / R);
    if (x.size() == 1) return u;
    double rho = f.sublevel_radius(t);
    double c = std::min(1.0, std::max(-1.0, rho / R));
    double theta = tilt * std::acos(c);
    if (theta == 0.0) return u;
    // Random unit direction orthogonal to u spans the rotation plane.
    Vec w(x.size());
    for (;;) {
      Vec g = rng.gaussian_vector(x.size());
      Vec perp = sub(g, scaled(u, dot(g, u)));
      double n = norm(perp);
      if (n > 1e-12) {
        w = scaled(perp, 1.0 / n);
        break;
      }
    }
    return add(scaled(u, std::cos(theta)), scaled(w, std::sin(theta)));
  }
  const auto& lf = f.as<LinearFractional>();
  // {f < t} is the halfspace with normal num_coeff - t * den_coeff; its unit
  // normal is the only admissible direction, so tilt has no effect here.
  Vec g = sub(lf.num_coeff, scaled(lf.den_coeff, t));
  double n = norm(g);
  if (n <= 1e-14) return quasi_subgradient(pb, x);
  return scaled(g, 1.0 / n);
}

struct CertificateResult {
  bool ok = true;
  int checked = 0;            // accepted sample points
  double worst_slack = -std::numeric_limits<double>::infinity();
  Vec witness;                // worst sample (empty when none accepted)
};

// Empirically test that g behaves as a unit normal of {f < f(x) - eps} at x:
// every sampled strictly-better point must satisfy <g, y - x> <= tol.
inline CertificateResult check_subgradient_certificate(
    const ProblemInstance& pb, const Vec& x, const Vec& g, double eps,
    int samples, Rng& rng, double tol = 1e-9) {
  if (std::abs(norm(g) - 1.0) > 1e-9) {
    throw std::invalid_argument(
        "check_subgradient_certificate: g must be a unit vector");
  }
  CertificateResult res;
  const Objective& f = pb.objective;
  double t = f.value(x) - eps;
  if (t <= pb.optimal_value) return res;  // empty sublevel set: vacuous pass

  std::size_t n = x.size();
  Vec lo(n), hi(n);
  if (f.radial()) {
    double rho = f.sublevel_radius(t);
    const Vec& c = f.center();
    for (std::size_t i = 0; i < n; ++i) {
      lo[i] = c[i] - rho;
      hi[i] = c[i] + rho;
    }
  } else {
    Vec anchor = project(pb.optimal_set, x);
    double side = 4.0 * std::max(1.0, dist(x, anchor));
    for (std::size_t i = 0; i < n; ++i) {
      lo[i] = anchor[i] - side;
      hi[i] = anchor[i] + side;
    }
  }
  long attempts = 100L * samples;
  while (res.checked < samples && attempts-- > 0) {
    Vec y = rng.in_box(lo, hi);
    if (!f.radial() && f.denominator(y) <= 1e-12) continue;
    if (!(f.value(y) < t)) continue;
    ++res.checked;
    double slack = dot(g, sub(y, x));
    if (slack > res.worst_slack) {
      res.worst_slack = slack;
      res.witness = y;
    }
    if (slack > tol) res.ok = false;
  }
  return res;
}

struct ValidationResult {
  bool ok = true;
  int checked = 0;
  double worst_slack = -std::numeric_limits<double>::infinity();
};

// Sample-test the upper growth bound f - f_min <= L * dist^p over
// B(0, box_radius); points outside the fractional domain are skipped.
inline ValidationResult validate_holder(const ProblemInstance& pb,
                                        std::optional<HolderCertificate> cert,
                                        int samples, double box_radius,
                                        Rng& rng, double tol = 1e-9) {
  HolderCertificate c = cert.value_or(pb.holder);
  ValidationResult res;
  std::size_t n = pb.objective.dim();
  for (int i = 0; i < samples; ++i) {
    Vec y = rng.in_ball(zeros(n), box_radius);
    if (!pb.objective.radial() && pb.objective.denominator(y) <= 1e-9) continue;
    double lhs = pb.objective.value(y) - pb.optimal_value;
    double rhs = c.modulus * powr(distance_to_optimum(pb, y), c.order);
    ++res.checked;
    res.worst_slack = std::max(res.worst_slack, lhs - rhs);
  }
  res.ok = res.worst_slack <= tol;
  return res;
}

// Sample-test the lower growth bound f - f_min >= eta * dist^q over
// B(0, radius) intersected with the feasible set.
inline ValidationResult validate_sharp(const ProblemInstance& pb,
                                       const SharpCertificate& cert,
                                       int samples, Rng& rng,
                                       double tol = 1e-9) {
  ValidationResult res;
  std::size_t n = pb.objective.dim();
  long attempts = 100L * samples;
  while (res.checked < samples && attempts-- > 0) {
    Vec y = rng.in_ball(zeros(n), cert.radius);
    if (!contains(pb.feasible, y)) continue;
    if (!pb.objective.radial() && pb.objective.denominator(y) <= 1e-9) continue;
    double lhs = pb.objective.value(y) - pb.optimal_value;
    double rhs = cert.modulus * powr(distance_to_optimum(pb, y), cert.order);
    ++res.checked;
    res.worst_slack = std::max(res.worst_slack, rhs - lhs);
  }
  res.ok = res.worst_slack <= tol;
  return res;
}

namespace detail {

// inf over the set of <coeff, x> + offset; -inf when unbounded below.
inline double inf_linear(const FeasibleSet& set, const Vec& coeff,
                         double offset) {
  if (set.is<Box>()) {
    const auto& b = set.as<Box>();
    double s = offset;
    for (std::size_t i = 0; i < coeff.size(); ++i) {
      s += std::min(coeff[i] * b.lower[i], coeff[i] * b.upper[i]);
    }
    return s;
  }
  if (set.is<Ball>()) {
    const auto& s = set.as<Ball>();
    return dot(coeff, s.center) - norm(coeff) * s.radius + offset;
  }
  if (norm(coeff) == 0.0) return offset;
  return -std::numeric_limits<double>::infinity();
}

}  // namespace detail

inline ProblemInstance make_power_norm(std::string name, Vec center, double p,
                                       double modulus, FeasibleSet feasible,
                                       HolderCertificate holder,
                                       std::optional<SharpCertificate> sharp) {
  if (!(p > 0.0 && p <= 1.0)) {
    throw std::invalid_argument("power_norm: exponent must lie in (0, 1]");
  }
  if (!(modulus > 0.0)) {
    throw std::invalid_argument("power_norm: modulus must be positive");
  }
  if (!contains(feasible, center)) {
    throw std::invalid_argument(
        "power_norm: center must be feasible so the minimizer is explicit");
  }
  FeasibleSet opt = FeasibleSet::point(center);
  return ProblemInstance{std::move(name),
                         Objective(PowerNorm{std::move(center), p, modulus}),
                         std::move(feasible),
                         0.0,
                         std::move(opt),
                         holder,
                         sharp};
}

inline ProblemInstance make_piecewise_power(
    std::string name, Vec center, double outer_p, double inner_q,
    FeasibleSet feasible, HolderCertificate holder,
    std::optional<SharpCertificate> sharp) {
  if (!(outer_p > 0.0 && outer_p <= 1.0)) {
    throw std::invalid_argument(
        "piecewise_power: outer exponent must lie in (0, 1]");
  }
  if (!(inner_q >= outer_p)) {
    throw std::invalid_argument(
        "piecewise_power: inner exponent must be at least the outer one");
  }
  if (!contains(feasible, center)) {
    throw std::invalid_argument(
        "piecewise_power: center must be feasible so the minimizer is explicit");
  }
  FeasibleSet opt = FeasibleSet::point(center);
  return ProblemInstance{
      std::move(name),
      Objective(PiecewisePower{std::move(center), outer_p, inner_q}),
      std::move(feasible),
      0.0,
      std::move(opt),
      holder,
      sharp};
}

inline ProblemInstance make_linear_fractional(
    std::string name, Vec num_coeff, double num_offset, Vec den_coeff,
    double den_offset, FeasibleSet feasible, double optimal_value,
    Vec optimal_point, HolderCertificate holder,
    std::optional<SharpCertificate> sharp) {
  require_same_dim(num_coeff, den_coeff);
  double den_inf = detail::inf_linear(feasible, den_coeff, den_offset);
  if (!(den_inf > 0.0)) {
    throw std::invalid_argument(
        "linear_fractional: denominator must be positive on the feasible set");
  }
  if (!contains(feasible, optimal_point)) {
    throw std::invalid_argument("linear_fractional: optimal point infeasible");
  }
  Objective obj(LinearFractional{std::move(num_coeff), num_offset,
                                 std::move(den_coeff), den_offset});
  if (std::abs(obj.value(optimal_point) - optimal_value) > 1e-12) {
    throw std::invalid_argument(
        "linear_fractional: optimal value does not match the optimal point");
  }
  FeasibleSet opt = FeasibleSet::point(std::move(optimal_point));
  return ProblemInstance{std::move(name), std::move(obj),   std::move(feasible),
                         optimal_value,   std::move(opt),   holder,
                         sharp};
}

// Built-in instances used by the test suite and the demos. All of them have
// closed-form minimizers, so distances to the optimal set are exact.
inline std::vector<ProblemInstance> catalog() {
  std::vector<ProblemInstance> v;
  v.push_back(make_power_norm(
      "power_norm", {0.0, 0.0}, 1.0, 1.0,
      FeasibleSet::box({-10.0, -10.0}, {10.0, 10.0}),
      HolderCertificate{1.0, 1.0}, SharpCertificate{1.0, 1.0, 25.0}));
  v.push_back(make_power_norm(
      "power_norm_sqrt", {0.0, 0.0}, 0.5, 1.0,
      FeasibleSet::box({-10.0, -10.0}, {10.0, 10.0}),
      HolderCertificate{0.5, 1.0}, SharpCertificate{0.5, 1.0, 25.0}));
  v.push_back(make_piecewise_power(
      "piecewise_power", {0.0, 0.0}, 1.0, 2.0,
      FeasibleSet::box({-10.0, -10.0}, {10.0, 10.0}),
      HolderCertificate{1.0, 1.0}, SharpCertificate{2.0, 0.05, 25.0}));
  v.push_back(make_linear_fractional(
      "linear_fractional", {1.0, 0.0}, 2.0, {0.0, 1.0}, 4.0,
      FeasibleSet::box({0.0, 0.0}, {1.0, 1.0}), 2.0 / 5.0, {0.0, 1.0},
      HolderCertificate{1.0, 6.0}, SharpCertificate{1.0, 0.05, 3.0}));
  return v;
}

inline ProblemInstance catalog_entry(const std::string& name) {
  for (auto& pb : catalog()) {
    if (pb.name == name) return pb;
  }
  throw std::invalid_argument("unknown catalog problem: " + name);
}

}  // namespace qsub
