#pragma once

// Trace-driven verification layer: re-checks the one-step descent and step
// bound conditions, iteration-complexity budgets, convergence-rate envelopes,
// and the scalar recursion bounds that back them. All checkers are pure
// functions of immutable traces.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qsub/linalg.hpp"
#include "qsub/problems.hpp"
#include "qsub/rng.hpp"
#include "qsub/solvers.hpp"
#include "qsub/stepsizes.hpp"

namespace qsub {

namespace detail {

inline double nan_value() { return std::numeric_limits<double>::quiet_NaN(); }
inline double neg_inf() { return -std::numeric_limits<double>::infinity(); }

inline bool near(double x, double y, double tol = 1e-12) {
  return std::abs(x - y) <= tol * std::max({1.0, std::abs(x), std::abs(y)});
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Framework-condition checkers
// ---------------------------------------------------------------------------

struct ConditionCheck {
  double max_residual = detail::neg_inf();  // -inf when the quantifier is empty
  bool vacuous = true;
  bool holds = true;
  double tol = 0.0;
};

// One-step descent inequality, recomputed from trace columns:
//   dist^2_{k+1} - dist^2_k + alpha * v_k * (gap_k - eps)^{1/p} - beta * v_k^2
// over every k with a successor and gap_k > eps.
inline ConditionCheck check_h1(const IterationTrace& trace, double tol = 1e-9) {
  ConditionCheck res;
  res.tol = tol;
  const FrameworkConstants& c = trace.constants;
  const auto& R = trace.records;
  for (std::size_t i = 0; i + 1 < R.size(); ++i) {
    if (!(R[i].gap > c.eps)) continue;
    double u = R[i].dist * R[i].dist;
    double u_next = R[i + 1].dist * R[i + 1].dist;
    double residual = u_next - u +
                      c.alpha * R[i].stepsize * powr(R[i].gap - c.eps, 1.0 / c.p) -
                      c.beta * R[i].stepsize * R[i].stepsize;
    res.vacuous = false;
    res.max_residual = std::max(res.max_residual, residual);
  }
  res.holds = res.vacuous || res.max_residual <= tol;
  return res;
}

// Step-length bound ||x_{k+1} - x_k|| <= gamma * v_k over every non-terminal
// row (the terminal row records step_length == 0 and is skipped).
inline ConditionCheck check_h3(const IterationTrace& trace, double tol = 1e-10) {
  ConditionCheck res;
  res.tol = tol;
  const FrameworkConstants& c = trace.constants;
  const auto& R = trace.records;
  for (std::size_t i = 0; i + 1 < R.size(); ++i) {
    double residual = R[i].step_length - c.gamma * R[i].stepsize;
    res.vacuous = false;
    res.max_residual = std::max(res.max_residual, residual);
  }
  res.holds = res.vacuous || res.max_residual <= tol;
  return res;
}

// ---------------------------------------------------------------------------
// Iteration-complexity budgets
// ---------------------------------------------------------------------------

struct ComplexityReport {
  enum class Kind { k1, k2, k3 };
  Kind kind = Kind::k1;
  long budget = 0;           // real-valued budget rounded up
  double budget_real = 0.0;
  double value_bound = 0.0;  // level achieved_min is compared against
  double achieved_min = 0.0;
  bool holds = false;
  double delta = 0.0;
};

inline const char* to_string(ComplexityReport::Kind k) {
  switch (k) {
    case ComplexityReport::Kind::k1: return "k1";
    case ComplexityReport::Kind::k2: return "k2";
    case ComplexityReport::Kind::k3: return "k3";
  }
  return "?";
}

// Budget and bound only; achieved_min/holds are filled by check_complexity.
// x1 is the starting point the budget is quoted for (projected onto the
// feasible set first, matching what a run does).
inline ComplexityReport complexity_budget(ComplexityReport::Kind kind,
                                          const ProblemInstance& pb,
                                          const StepsizeRule& rule,
                                          const FrameworkConstants& c,
                                          double delta, const Vec& x1) {
  if (!(delta > 0.0)) {
    throw std::invalid_argument("complexity_budget: delta must be positive");
  }
  ComplexityReport rep;
  rep.kind = kind;
  rep.delta = delta;
  Vec x = project(pb.feasible, x1);
  double d = distance(pb.optimal_set, x);
  double d2 = d * d;
  switch (kind) {
    case ComplexityReport::Kind::k1: {
      if (rule.kind() != StepsizeRule::Kind::constant) {
        throw std::invalid_argument("k1 requires the constant stepsize rule");
      }
      double v = rule.as<ConstantStep>().v;
      rep.budget_real = d2 / (c.alpha_inf * v * delta);
      rep.value_bound =
          pb.optimal_value + powr(c.beta_sup * v / c.alpha_inf + delta, c.p) +
          c.eps;
      break;
    }
    case ComplexityReport::Kind::k2: {
      if (rule.kind() != StepsizeRule::Kind::diminishing) {
        throw std::invalid_argument("k2 requires the diminishing stepsize rule");
      }
      const auto& dim = rule.as<DiminishingStep>();
      rep.budget_real = std::pow(
          (1.0 - dim.s) * d2 / (c.alpha_inf * dim.c * delta), 1.0 / (1.0 - dim.s));
      // The bound is per-iteration for this rule; achieved_min is compared
      // against this level after subtracting the k-dependent term.
      rep.value_bound = pb.optimal_value + c.eps;
      break;
    }
    case ComplexityReport::Kind::k3: {
      if (rule.kind() != StepsizeRule::Kind::dynamic) {
        throw std::invalid_argument("k3 requires the dynamic stepsize rule");
      }
      double lo = rule.lambda_lower();
      double hi = rule.lambda_upper();
      rep.budget_real = 4.0 * c.beta_sup * d2 /
                        (c.alpha_inf * c.alpha_inf * lo * (2.0 - hi) * delta * delta);
      rep.value_bound = pb.optimal_value + powr(delta, c.p) + c.eps;
      break;
    }
  }
  rep.budget = std::max<long>(1, static_cast<long>(std::ceil(rep.budget_real)));
  return rep;
}

// Fill achieved_min/holds from a trace. The trace must reach the budget,
// except when it stopped because the iterate entered the target level set
// and would never move again (a virtual continuation attains the same min).
inline ComplexityReport check_complexity(const IterationTrace& trace,
                                         const ProblemInstance& pb,
                                         const StepsizeRule& rule,
                                         ComplexityReport rep,
                                         double tol = 1e-9) {
  const auto& R = trace.records;
  long len = static_cast<long>(R.size());
  if (len < rep.budget && trace.stop != StopReason::entered_optimal_set) {
    throw std::invalid_argument(
        "check_complexity: trace shorter than the iteration budget");
  }
  long upto = std::min(rep.budget, len);
  const FrameworkConstants& c = trace.constants;
  double best = std::numeric_limits<double>::infinity();
  if (rep.kind == ComplexityReport::Kind::k2) {
    const auto& dim = rule.as<DiminishingStep>();
    for (long i = 0; i < upto; ++i) {
      double k = static_cast<double>(i + 1);
      double shifted =
          R[i].f_value -
          powr(c.beta_sup * dim.c * std::pow(k, -dim.s) / c.alpha_inf + rep.delta,
               c.p);
      best = std::min(best, shifted);
    }
  } else {
    for (long i = 0; i < upto; ++i) best = std::min(best, R[i].f_value);
  }
  (void)pb;
  rep.achieved_min = best;
  rep.holds = best <= rep.value_bound + tol;
  return rep;
}

// ---------------------------------------------------------------------------
// Empirical rate fitting
// ---------------------------------------------------------------------------

struct RateFit {
  enum class Model { geometric, power };
  Model model = Model::geometric;
  double rate = 0.0;       // tau for geometric, decay exponent for power
  double amplitude = 0.0;
  double floor = 0.0;
  double r_squared = 0.0;
  long window_first = 0;   // 0-based series indices actually used
  long window_last = 0;
  bool reliable = false;   // r_squared >= 0.9
};

namespace detail {

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

inline LinearFit least_squares(const std::vector<double>& xs,
                               const std::vector<double>& ys) {
  std::size_t n = xs.size();
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double dx = xs[i] - mx;
    double dy = ys[i] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  LinearFit fit;
  if (sxx == 0.0) {
    throw std::invalid_argument("least_squares: degenerate abscissa");
  }
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double e = ys[i] - (fit.intercept + fit.slope * xs[i]);
    ss_res += e * e;
  }
  fit.r_squared = syy > 0.0 ? std::max(0.0, 1.0 - ss_res / syy)
                            : (ss_res <= 1e-18 ? 1.0 : 0.0);
  return fit;
}

}  // namespace detail

// Least-squares regression of log(u_k - floor) against k on [burn_in, end).
// Points at or below the floor are skipped; fewer than 5 usable points is an
// error. Returns tau = exp(slope).
inline RateFit fit_geometric(const std::vector<double>& series, double floor,
                             long burn_in) {
  if (floor < 0.0) throw std::invalid_argument("fit_geometric: negative floor");
  if (burn_in < 0) burn_in = 0;
  std::vector<double> xs, ys;
  long first = -1, last = -1;
  for (long i = burn_in; i < static_cast<long>(series.size()); ++i) {
    double excess = series[i] - floor;
    if (!(excess > 0.0)) continue;
    xs.push_back(static_cast<double>(i));
    ys.push_back(std::log(excess));
    if (first < 0) first = i;
    last = i;
  }
  if (xs.size() < 5) {
    throw std::invalid_argument(
        "fit_geometric: fewer than 5 usable points above the floor");
  }
  detail::LinearFit lf = detail::least_squares(xs, ys);
  RateFit fit;
  fit.model = RateFit::Model::geometric;
  fit.rate = std::exp(lf.slope);
  fit.amplitude = std::exp(lf.intercept);
  fit.floor = floor;
  fit.r_squared = lf.r_squared;
  fit.window_first = first;
  fit.window_last = last;
  fit.reliable = fit.r_squared >= 0.9;
  return fit;
}

// Least-squares regression of log(u_k) against log(k) on [burn_in, end),
// with k = index + 1. Returns the decay exponent e of u ~ A * k^{-e}.
inline RateFit fit_power(const std::vector<double>& series, long burn_in) {
  if (burn_in < 0) burn_in = 0;
  std::vector<double> xs, ys;
  long first = -1, last = -1;
  for (long i = burn_in; i < static_cast<long>(series.size()); ++i) {
    if (!(series[i] > 0.0)) continue;
    xs.push_back(std::log(static_cast<double>(i + 1)));
    ys.push_back(std::log(series[i]));
    if (first < 0) first = i;
    last = i;
  }
  if (xs.size() < 5) {
    throw std::invalid_argument("fit_power: fewer than 5 usable points");
  }
  detail::LinearFit lf = detail::least_squares(xs, ys);
  RateFit fit;
  fit.model = RateFit::Model::power;
  fit.rate = -lf.slope;
  fit.amplitude = std::exp(lf.intercept);
  fit.floor = 0.0;
  fit.r_squared = lf.r_squared;
  fit.window_first = first;
  fit.window_last = last;
  fit.reliable = fit.r_squared >= 0.9;
  return fit;
}

inline std::vector<double> dist_sq_series(const IterationTrace& trace) {
  std::vector<double> u;
  u.reserve(trace.records.size());
  for (const auto& r : trace.records) u.push_back(r.dist * r.dist);
  return u;
}

// Default fit/envelope anchor: for the dynamic rule, the first index from
// which dist^2 is non-increasing to the end of the trace; otherwise 10% of
// the trace length. Returned as a 0-based series index.
inline long default_burn_in(const IterationTrace& trace) {
  long len = static_cast<long>(trace.records.size());
  if (len == 0) return 0;
  if (trace.rule && trace.rule->kind() == StepsizeRule::Kind::dynamic) {
    std::vector<double> u = dist_sq_series(trace);
    long anchor = 0;
    for (long i = 1; i < len; ++i) {
      if (u[i] > u[i - 1]) anchor = i;
    }
    return std::min(anchor, len - 1);
  }
  return std::min(len / 10, len - 1);
}

// ---------------------------------------------------------------------------
// Scalar recursion bounds
// ---------------------------------------------------------------------------

// Closed-form bound for nonnegative u with u_{k+1} <= u_k - a*u_k^{1+r} + b.
// b == 0: u_{1+k} <= u1 * (1 + r*a*u1^r*k)^{-1/r}.
// b > 0:  requires b < a^{-1/r} * (1+r)^{-(1+r)/r}; then
//         u_{1+k} <= u1 * tau^k + (b/a)^{1/(1+r)} with
//         tau = 1 - a*(1+r)*(b/a)^{r/(1+r)} in (0, 1).
inline double recursion_bound_power(double u1, double a, double b, double r,
                                    long k) {
  if (!(r > 0.0) || !(a > 0.0) || b < 0.0 || u1 < 0.0 || k < 0) {
    throw std::invalid_argument("recursion_bound_power: invalid parameters");
  }
  if (b == 0.0) {
    return u1 * std::pow(1.0 + r * a * std::pow(u1, r) * static_cast<double>(k),
                         -1.0 / r);
  }
  double b_max = std::pow(a, -1.0 / r) * std::pow(1.0 + r, -(1.0 + r) / r);
  if (!(b < b_max)) {
    throw std::invalid_argument(
        "recursion_bound_power: b must be below a^{-1/r}(1+r)^{-(1+r)/r} = " +
        std::to_string(b_max));
  }
  double tau = 1.0 - a * (1.0 + r) * std::pow(b / a, r / (1.0 + r));
  return u1 * std::pow(tau, static_cast<double>(k)) +
         std::pow(b / a, 1.0 / (1.0 + r));
}

struct DecayBound {
  double value = 0.0;
  // True when the value is only an asymptotic envelope (has an o(.) term),
  // so pointwise finite-k comparisons must not be made against it.
  bool asymptotic = false;
};

// Stated closed-form bound for u_{k+1} <= (1 - a*k^{-s})*u_k + b*k^{-t}:
// t == s -> u1 * e^{a s/(1-s)} * (e^{-a})^k + b/a;
// t  > s -> (b/a) * k^{s-t}, asymptotic only.
// The t == s form is reproduced as stated; it is NOT attainable for all
// admissible parameters (the true transient decays subgeometrically, see
// recursion_transient_envelope below and the recursion sweep checks).
inline DecayBound recursion_bound_diminishing(double u1, double a, double b,
                                              double s, double t, long k) {
  if (!(s > 0.0 && s < 1.0)) {
    throw std::invalid_argument(
        "recursion_bound_diminishing: s must lie in (0, 1)");
  }
  if (!(t >= s)) {
    throw std::invalid_argument("recursion_bound_diminishing: requires t >= s");
  }
  if (!(a > 0.0) || !(b > 0.0) || u1 < 0.0 || k < 0) {
    throw std::invalid_argument(
        "recursion_bound_diminishing: invalid parameters");
  }
  DecayBound out;
  if (t == s) {
    out.value = u1 * std::exp(a * s / (1.0 - s)) *
                    std::exp(-a * static_cast<double>(k)) +
                b / a;
    out.asymptotic = false;
    return out;
  }
  if (k < 1) {
    throw std::invalid_argument(
        "recursion_bound_diminishing: asymptotic form needs k >= 1");
  }
  out.value = (b / a) * std::pow(static_cast<double>(k), s - t);
  out.asymptotic = true;
  return out;
}

// Valid transient envelope for the t == s recursion above (a in (0, 1]):
//   u_{k+1} <= b/a + (u1 - b/a)_+ * exp(-a * ((k+1)^{1-s} - 1) / (1-s)).
// The decay is subgeometric, which is the fastest the recursion allows.
inline double recursion_transient_envelope(double u1, double a, double b,
                                           double s, long k) {
  if (!(s > 0.0 && s < 1.0)) {
    throw std::invalid_argument(
        "recursion_transient_envelope: s must lie in (0, 1)");
  }
  if (!(a > 0.0 && a <= 1.0)) {
    throw std::invalid_argument(
        "recursion_transient_envelope: a must lie in (0, 1]");
  }
  if (!(b > 0.0) || u1 < 0.0 || k < 0) {
    throw std::invalid_argument(
        "recursion_transient_envelope: invalid parameters");
  }
  double kp1 = static_cast<double>(k) + 1.0;
  double integral = (std::pow(kp1, 1.0 - s) - 1.0) / (1.0 - s);
  return b / a + std::max(0.0, u1 - b / a) * std::exp(-a * integral);
}

// ---------------------------------------------------------------------------
// Recursion property sweeps
// ---------------------------------------------------------------------------

struct SweepReport {
  int trials = 0;
  int violating_trials = 0;
  double worst_margin = detail::neg_inf();  // max of (sequence - bound)
  // First observed violation, for reporting.
  bool has_example = false;
  double ex_u1 = 0.0, ex_a = 0.0, ex_b = 0.0, ex_param = 0.0;
  long ex_k = 0;
  double ex_value = 0.0, ex_bound = 0.0;
};

namespace detail {

inline void note_violation(SweepReport& rep, bool& violated_this_trial,
                           double u1, double a, double b, double param, long k,
                           double value, double bound) {
  if (!violated_this_trial) {
    ++rep.violating_trials;
    violated_this_trial = true;
  }
  if (!rep.has_example) {
    rep.has_example = true;
    rep.ex_u1 = u1;
    rep.ex_a = a;
    rep.ex_b = b;
    rep.ex_param = param;
    rep.ex_k = k;
    rep.ex_value = value;
    rep.ex_bound = bound;
  }
}

}  // namespace detail

// Drives the equality recursion u_{k+1} = max(0, u_k - a*u_k^{1+r} + b) and
// compares it against recursion_bound_power at every step. Expected to
// report zero violating trials.
inline SweepReport sweep_recursion_power(int draws, long steps,
                                         std::uint64_t seed, bool with_b,
                                         double tol = 1e-9) {
  Rng rng(seed);
  SweepReport rep;
  for (int trial = 0; trial < draws; ++trial) {
    double u1 = rng.uniform(0.1, 10.0);
    double a = rng.uniform(0.05, 1.0);
    double r = rng.uniform(0.25, 2.0);
    double b = 0.0;
    if (with_b) {
      double b_max =
          std::pow(a, -1.0 / r) * std::pow(1.0 + r, -(1.0 + r) / r);
      b = rng.uniform(0.05, 0.95) * b_max;
    }
    ++rep.trials;
    bool violated = false;
    double u = u1;
    for (long k = 1; k <= steps; ++k) {
      u = std::max(0.0, u - a * std::pow(u, 1.0 + r) + b);
      double bound = recursion_bound_power(u1, a, b, r, k);
      double margin = u - bound;
      rep.worst_margin = std::max(rep.worst_margin, margin);
      if (margin > tol) {
        detail::note_violation(rep, violated, u1, a, b, r, k, u, bound);
      }
    }
  }
  return rep;
}

// Same sweep against the stated geometric-transient form of
// recursion_bound_diminishing (t == s). The stated form is not attainable
// for slowly decaying coefficients, so this sweep is EXPECTED to find
// violations; callers assert on the report rather than on emptiness.
inline SweepReport sweep_recursion_diminishing_stated(int draws, long steps,
                                                      std::uint64_t seed,
                                                      double tol = 1e-9) {
  Rng rng(seed);
  SweepReport rep;
  for (int trial = 0; trial < draws; ++trial) {
    double u1 = rng.uniform(0.1, 10.0);
    double a = rng.uniform(0.05, 0.95);
    double b = rng.uniform(0.05, 5.0);
    double s = rng.uniform(0.1, 0.9);
    ++rep.trials;
    bool violated = false;
    double u = u1;
    for (long k = 1; k <= steps; ++k) {
      u = (1.0 - a * std::pow(static_cast<double>(k), -s)) * u +
          b * std::pow(static_cast<double>(k), -s);
      double bound = recursion_bound_diminishing(u1, a, b, s, s, k).value;
      double margin = u - bound;
      rep.worst_margin = std::max(rep.worst_margin, margin);
      if (margin > tol) {
        detail::note_violation(rep, violated, u1, a, b, s, k, u, bound);
      }
    }
  }
  return rep;
}

// Same sweep against the corrected subgeometric transient envelope;
// expected to report zero violating trials.
inline SweepReport sweep_recursion_diminishing_envelope(int draws, long steps,
                                                        std::uint64_t seed,
                                                        double tol = 1e-9) {
  Rng rng(seed);
  SweepReport rep;
  for (int trial = 0; trial < draws; ++trial) {
    double u1 = rng.uniform(0.1, 10.0);
    double a = rng.uniform(0.05, 0.95);
    double b = rng.uniform(0.05, 5.0);
    double s = rng.uniform(0.1, 0.9);
    ++rep.trials;
    bool violated = false;
    double u = u1;
    for (long k = 1; k <= steps; ++k) {
      u = (1.0 - a * std::pow(static_cast<double>(k), -s)) * u +
          b * std::pow(static_cast<double>(k), -s);
      double bound = recursion_transient_envelope(u1, a, b, s, k);
      double margin = u - bound;
      rep.worst_margin = std::max(rep.worst_margin, margin);
      if (margin > tol) {
        detail::note_violation(rep, violated, u1, a, b, s, k, u, bound);
      }
    }
  }
  return rep;
}

struct ProbeResult {
  RateFit fit;
  double expected_exponent = 0.0;
  double expected_amplitude = 0.0;
  bool exponent_ok = false;   // within 5% of t - s
  bool amplitude_ok = false;  // within a factor of 2 of b/a
};

// Simulates u_{k+1} = (1 - a*k^{-s})*u_k + b*k^{-t} with t > s and fits the
// tail decay; the sequence should follow (b/a) * k^{s-t}.
inline ProbeResult diminishing_exponent_probe(double a, double b, double s,
                                              double t, long steps) {
  if (!(t > s)) {
    throw std::invalid_argument("diminishing_exponent_probe: requires t > s");
  }
  std::vector<double> u;
  u.reserve(static_cast<std::size_t>(steps));
  double cur = 1.0;
  u.push_back(cur);
  for (long k = 1; k < steps; ++k) {
    cur = (1.0 - a * std::pow(static_cast<double>(k), -s)) * cur +
          b * std::pow(static_cast<double>(k), -t);
    u.push_back(cur);
  }
  ProbeResult res;
  res.fit = fit_power(u, steps / 2);
  res.expected_exponent = t - s;
  res.expected_amplitude = b / a;
  res.exponent_ok =
      std::abs(res.fit.rate - res.expected_exponent) <= 0.05 * res.expected_exponent;
  res.amplitude_ok = res.fit.amplitude <= 2.0 * res.expected_amplitude &&
                     res.fit.amplitude >= 0.5 * res.expected_amplitude;
  return res;
}

// ---------------------------------------------------------------------------
// Convergence-rate envelope checks
// ---------------------------------------------------------------------------

enum class Theorem { t33i, t33ii, t34i, t34ii, t34iii, t35i, t35ii };

inline const char* to_string(Theorem t) {
  switch (t) {
    case Theorem::t33i: return "t3.3i";
    case Theorem::t33ii: return "t3.3ii";
    case Theorem::t34i: return "t3.4i";
    case Theorem::t34ii: return "t3.4ii";
    case Theorem::t34iii: return "t3.4iii";
    case Theorem::t35i: return "t3.5i";
    case Theorem::t35ii: return "t3.5ii";
  }
  return "?";
}

inline std::optional<Theorem> theorem_from_id(const std::string& id) {
  if (id == "t3.3i") return Theorem::t33i;
  if (id == "t3.3ii") return Theorem::t33ii;
  if (id == "t3.4i") return Theorem::t34i;
  if (id == "t3.4ii") return Theorem::t34ii;
  if (id == "t3.4iii") return Theorem::t34iii;
  if (id == "t3.5i") return Theorem::t35i;
  if (id == "t3.5ii") return Theorem::t35ii;
  return std::nullopt;
}

enum class Verdict { holds, fails, inapplicable, certificate_radius_exceeded };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::holds: return "holds";
    case Verdict::fails: return "fails";
    case Verdict::inapplicable: return "inapplicable";
    case Verdict::certificate_radius_exceeded:
      return "certificate_radius_exceeded";
  }
  return "?";
}

struct EnvelopeOptions {
  std::optional<long> N;        // 1-based anchor iteration
  std::optional<double> q;      // sharp-growth order override
  std::optional<double> eta;    // sharp-growth modulus override
  std::optional<double> radius; // sharp-certificate radius override
  double tol = 1e-9;
};

struct EnvelopeResult {
  Theorem theorem = Theorem::t33i;
  Verdict verdict = Verdict::inapplicable;
  long N = 0;                     // anchor iteration actually used (1-based)
  double floor = detail::nan_value();
  double tau = detail::nan_value();            // proof-form geometric factor
  double envelope_coeff = detail::nan_value(); // gamma / leading coefficient
  double worst_violation = detail::neg_inf();  // max of u_k - envelope_k
  std::optional<RateFit> fit;
  std::string note;
};

namespace detail {

// Fitted-tau existence check shared by the geometric envelopes. When the
// series has no usable transient above the floor (it sits at the floor from
// the anchor on), the existential claim is witnessed trivially.
inline bool existential_geometric_ok(const std::vector<double>& u, double floor,
                                     long anchor_idx, double tol,
                                     EnvelopeResult& res) {
  try {
    RateFit fit = fit_geometric(u, floor, anchor_idx);
    res.fit = fit;
    if (!(fit.rate >= 0.0 && fit.rate < 1.0) || !fit.reliable) {
      res.note = "fitted geometric factor unreliable or out of range";
      return false;
    }
    return true;
  } catch (const std::invalid_argument&) {
    // Fewer than 5 points above the floor on the window: accept only if the
    // tail really is at the floor rather than erratic.
    for (std::size_t i = static_cast<std::size_t>(anchor_idx); i < u.size();
         ++i) {
      if (u[i] > floor + tol * std::max(1.0, floor)) {
        // isolated spikes above the floor, too few to fit
        res.note = "series exceeds the floor but has no fittable transient";
        return false;
      }
    }
    res.note = "series at the floor from the anchor on; transient absent";
    return true;
  }
}

}  // namespace detail

// Checks one convergence-rate envelope against a recorded trace.
//
// Two complementary checks run for the geometric envelopes: the pointwise
// inequality with the proof-form factor evaluated in the constant-sequence
// limit, and an existential regression fit (factor in [0,1), r^2 >= 0.9).
// Sublinear envelopes are checked pointwise; the diminishing-rule envelope
// searches for the smallest anchor when none is supplied.
inline EnvelopeResult envelope_check(const IterationTrace& trace,
                                     const ProblemInstance& pb, Theorem theorem,
                                     const EnvelopeOptions& options = {}) {
  EnvelopeResult res;
  res.theorem = theorem;

  const FrameworkConstants& c = trace.constants;
  const auto& R = trace.records;
  long len = static_cast<long>(R.size());
  if (len == 0) {
    res.note = "empty trace";
    return res;
  }
  if (!trace.rule) {
    res.note = "trace has no stepsize rule attached";
    return res;
  }

  bool is_t33 = theorem == Theorem::t33i || theorem == Theorem::t33ii;
  bool is_t34 = theorem == Theorem::t34i || theorem == Theorem::t34ii ||
                theorem == Theorem::t34iii;
  bool is_t35 = theorem == Theorem::t35i || theorem == Theorem::t35ii;

  // Stepsize-rule form.
  StepsizeRule::Kind want = is_t33   ? StepsizeRule::Kind::constant
                            : is_t34 ? StepsizeRule::Kind::dynamic
                                     : StepsizeRule::Kind::diminishing;
  if (trace.rule->kind() != want) {
    res.note = std::string("requires the ") +
               (is_t33 ? "constant" : is_t34 ? "dynamic" : "diminishing") +
               " stepsize rule";
    return res;
  }

  // The dynamic analysis assumes the rule targets the eps-optimal level.
  if (is_t34) {
    const auto& dyn = trace.rule->as<DynamicStep>();
    if (!detail::near(dyn.target, pb.optimal_value + c.eps) ||
        !detail::near(dyn.p, c.p)) {
      res.note = "dynamic rule must target optimal value + eps with the "
                 "certificate growth order";
      return res;
    }
  }

  // Coercivity backs boundedness for the constant and diminishing rules.
  if ((is_t33 || is_t35) && !pb.objective.coercive()) {
    res.note = "requires a coercive objective";
    return res;
  }

  // Sharp-growth certificate (possibly overridden).
  double q, eta, radius;
  if (options.q && options.eta && options.radius) {
    q = *options.q;
    eta = *options.eta;
    radius = *options.radius;
  } else if (pb.sharp) {
    q = options.q.value_or(pb.sharp->order);
    eta = options.eta.value_or(pb.sharp->modulus);
    radius = options.radius.value_or(pb.sharp->radius);
  } else {
    res.note = "no sharp-growth certificate available";
    return res;
  }
  if (!(q > 0.0 && eta > 0.0 && radius > 0.0)) {
    res.note = "invalid sharp-growth certificate parameters";
    return res;
  }

  // Growth-order form per theorem.
  double p = c.p;
  switch (theorem) {
    case Theorem::t33i:
      if (!detail::near(q, 2.0 * p)) {
        res.note = "requires sharp order q = 2p";
        return res;
      }
      break;
    case Theorem::t33ii:
      if (!(q > 2.0 * p) || detail::near(q, 2.0 * p)) {
        res.note = "requires sharp order q > 2p";
        return res;
      }
      break;
    case Theorem::t34i:
      if (!detail::near(q, p)) {
        res.note = "requires sharp order q = p";
        return res;
      }
      break;
    case Theorem::t34ii:
    case Theorem::t34iii:
      if (!(q > p) || detail::near(q, p)) {
        res.note = "requires sharp order q > p";
        return res;
      }
      break;
    case Theorem::t35i:
    case Theorem::t35ii:
      if (!detail::near(q, 2.0 * p)) {
        res.note = "requires sharp order q = 2p";
        return res;
      }
      break;
  }

  // Relaxation-level form and thresholds.
  double v = 0.0, dim_c = 0.0, dim_s = 0.0, lam_lo = 0.0, lam_hi = 0.0;
  if (is_t33) v = trace.rule->as<ConstantStep>().v;
  if (is_t35) {
    dim_c = trace.rule->as<DiminishingStep>().c;
    dim_s = trace.rule->as<DiminishingStep>().s;
  }
  if (is_t34) {
    lam_lo = trace.rule->lambda_lower();
    lam_hi = trace.rule->lambda_upper();
  }
  switch (theorem) {
    case Theorem::t33ii: {
      double lhs = powr(c.eps, 1.0 / p) + c.beta * v / c.alpha;
      double rhs = std::pow(eta, -2.0 / (q - 2.0 * p)) *
                   std::pow(2.0 * p / (c.alpha * v * q), q / (q - 2.0 * p));
      if (!(lhs < rhs)) {
        res.note = "relaxation/stepsize level exceeds the applicability "
                   "threshold " +
                   std::to_string(rhs);
        return res;
      }
      break;
    }
    case Theorem::t34ii:
      if (c.eps != 0.0) {
        res.note = "requires eps = 0";
        return res;
      }
      break;
    case Theorem::t34iii: {
      double thr = std::pow(c.alpha * c.alpha * q * lam_lo * (2.0 - lam_hi) /
                                (4.0 * c.beta * p),
                            -p * q / (2.0 * (q - p))) *
                   std::pow(eta, -p / (q - p));
      if (!(c.eps > 0.0 && c.eps < thr)) {
        res.note = "requires 0 < eps < " + std::to_string(thr);
        return res;
      }
      break;
    }
    case Theorem::t35i:
      if (c.eps != 0.0) {
        res.note = "requires eps = 0";
        return res;
      }
      break;
    case Theorem::t35ii:
      if (!(c.eps > 0.0)) {
        res.note = "requires eps > 0";
        return res;
      }
      break;
    default:
      break;
  }

  // Either-branch escape: an iterate already reached the eps-optimal level.
  for (const auto& rec : R) {
    if (rec.gap <= c.eps) {
      res.verdict = Verdict::holds;
      res.N = rec.k;
      res.note = c.eps > 0.0 ? "iterate entered the eps-optimal set"
                             : "iterate entered the optimal set";
      return res;
    }
  }

  std::vector<double> u = dist_sq_series(trace);

  // Anchor resolution (1-based iteration index).
  long N = 0;
  bool search_anchor = false;
  if (options.N) {
    N = *options.N;
    if (N < 1 || N > len) {
      res.note = "anchor N outside the trace";
      return res;
    }
  } else if (theorem == Theorem::t35i) {
    search_anchor = true;
    N = 1;
  } else {
    N = default_burn_in(trace) + 1;
  }
  res.N = N;

  // Certificate-radius coverage of the checked iterates: ||x_k|| is bounded
  // by dist_k + sup-norm of the optimal set when points are not recorded.
  double opt_reach = support_norm(pb.optimal_set);
  for (long i = N - 1; i < len; ++i) {
    double reach = R[i].point ? norm(*R[i].point) : R[i].dist + opt_reach;
    if (reach > radius + 1e-12) {
      res.verdict = Verdict::certificate_radius_exceeded;
      res.note = "iterate " + std::to_string(R[i].k) +
                 " lies outside the certified ball";
      return res;
    }
  }

  long iN = N - 1;  // 0-based anchor
  double uN = u[static_cast<std::size_t>(iN)];
  double point_tol = options.tol * std::max(1.0, uN);

  auto pointwise_geometric = [&](double tau, double floor) -> bool {
    bool ok = true;
    for (long i = iN; i < len; ++i) {
      double env = uN * std::pow(tau, static_cast<double>(i - iN)) + floor;
      double viol = u[static_cast<std::size_t>(i)] - env;
      res.worst_violation = std::max(res.worst_violation, viol);
      if (viol > point_tol) ok = false;
    }
    return ok;
  };

  switch (theorem) {
    case Theorem::t33i: {
      double a = std::pow(2.0, 1.0 - 1.0 / p) * c.alpha * v * powr(eta, 1.0 / p);
      double b = c.alpha * v * powr(c.eps, 1.0 / p) + c.beta * v * v;
      double tau_raw = 1.0 - a;
      res.tau = std::max(0.0, tau_raw);
      res.floor = tau_raw < 0.0 ? b : b / a;
      bool ok = pointwise_geometric(res.tau, res.floor);
      ok = detail::existential_geometric_ok(u, res.floor, iN, options.tol, res) && ok;
      res.verdict = ok ? Verdict::holds : Verdict::fails;
      return res;
    }
    case Theorem::t33ii: {
      double r_exp = q / (2.0 * p) - 1.0;
      double a = std::pow(2.0, 1.0 - 1.0 / p) * c.alpha * v * powr(eta, 1.0 / p);
      double b = c.alpha * v * powr(c.eps, 1.0 / p) + c.beta * v * v;
      double b_max = std::pow(a, -1.0 / r_exp) *
                     std::pow(1.0 + r_exp, -(1.0 + r_exp) / r_exp);
      if (!(b < b_max)) {
        res.verdict = Verdict::inapplicable;
        res.note = "recursion offset outside the contraction range";
        return res;
      }
      res.tau = 1.0 - a * (1.0 + r_exp) * std::pow(b / a, r_exp / (1.0 + r_exp));
      res.floor = std::pow(b / a, 1.0 / (1.0 + r_exp));
      bool ok = pointwise_geometric(res.tau, res.floor);
      ok = detail::existential_geometric_ok(u, res.floor, iN, options.tol, res) && ok;
      res.verdict = ok ? Verdict::holds : Verdict::fails;
      return res;
    }
    case Theorem::t34i: {
      double A0 = c.alpha * c.alpha / (4.0 * c.beta) * lam_lo * (2.0 - lam_hi);
      double a = std::pow(2.0, 1.0 - 2.0 / p) * A0 * powr(eta, 2.0 / p);
      double b = A0 * powr(c.eps, 2.0 / p);
      double tau_raw = 1.0 - a;
      res.tau = std::max(0.0, tau_raw);
      res.floor = tau_raw < 0.0 ? b : (b == 0.0 ? 0.0 : b / a);
      bool ok = pointwise_geometric(res.tau, res.floor);
      ok = detail::existential_geometric_ok(u, res.floor, iN, options.tol, res) && ok;
      res.verdict = ok ? Verdict::holds : Verdict::fails;
      return res;
    }
    case Theorem::t34ii: {
      double gamma = std::pow(2.0, 1.0 - 2.0 / p) * c.alpha * c.alpha *
                     (q - p) / (4.0 * c.beta * p) * lam_lo * (2.0 - lam_hi) *
                     powr(eta, 2.0 / p) * std::pow(uN, (q - p) / p);
      res.envelope_coeff = gamma;
      bool ok = true;
      for (long i = iN; i < len; ++i) {
        double env = uN / std::pow(1.0 + gamma * static_cast<double>(i - iN),
                                   p / (q - p));
        double viol = u[static_cast<std::size_t>(i)] - env;
        res.worst_violation = std::max(res.worst_violation, viol);
        if (viol > point_tol) ok = false;
      }
      try {
        res.fit = fit_power(u, iN);
      } catch (const std::invalid_argument&) {
        // informational only
      }
      res.verdict = ok ? Verdict::holds : Verdict::fails;
      return res;
    }
    case Theorem::t34iii: {
      double A0 = c.alpha * c.alpha / (4.0 * c.beta) * lam_lo * (2.0 - lam_hi);
      double r_exp = q / p - 1.0;
      double a = std::pow(2.0, 1.0 - 2.0 / p) * A0 * powr(eta, 2.0 / p);
      double b = A0 * powr(c.eps, 2.0 / p);
      double b_max = std::pow(a, -1.0 / r_exp) *
                     std::pow(1.0 + r_exp, -(1.0 + r_exp) / r_exp);
      if (!(b < b_max)) {
        res.verdict = Verdict::inapplicable;
        res.note = "recursion offset outside the contraction range";
        return res;
      }
      res.tau = 1.0 - a * (1.0 + r_exp) * std::pow(b / a, r_exp / (1.0 + r_exp));
      res.floor = std::pow(b / a, 1.0 / (1.0 + r_exp));
      bool ok = pointwise_geometric(res.tau, res.floor);
      ok = detail::existential_geometric_ok(u, res.floor, iN, options.tol, res) && ok;
      res.verdict = ok ? Verdict::holds : Verdict::fails;
      return res;
    }
    case Theorem::t35i: {
      double E = (c.beta * dim_c / c.alpha) * powr(2.0 / eta, 1.0 / p);
      res.envelope_coeff = E;
      auto env_at = [&](long i) {
        return E * std::pow(static_cast<double>(i + 1), -dim_s) *
                   (1.0 + 1e-6) +
               options.tol;
      };
      if (search_anchor) {
        long last_violation = 0;  // 1-based; 0 = none
        for (long i = 0; i < len; ++i) {
          double viol = u[static_cast<std::size_t>(i)] - env_at(i);
          if (viol > 0.0) {
            last_violation = i + 1;
            res.worst_violation = std::max(res.worst_violation, viol);
          }
        }
        N = last_violation + 1;
        res.N = N;
        long window = len - N + 1;
        if (N > len || (len >= 20 && window < 10)) {
          res.verdict = Verdict::fails;
          res.note = "no stable envelope window before the end of the trace";
          return res;
        }
      } else {
        bool ok = true;
        for (long i = N - 1; i < len; ++i) {
          double viol = u[static_cast<std::size_t>(i)] - env_at(i);
          res.worst_violation = std::max(res.worst_violation, viol);
          if (viol > 0.0) ok = false;
        }
        if (!ok) {
          res.verdict = Verdict::fails;
          return res;
        }
      }
      try {
        res.fit = fit_power(u, N - 1);
      } catch (const std::invalid_argument&) {
        // informational only
      }
      res.verdict = Verdict::holds;
      return res;
    }
    case Theorem::t35ii: {
      res.floor = powr(2.0 * c.eps / eta, 1.0 / p);
      bool ok = detail::existential_geometric_ok(u, res.floor, iN, options.tol, res);
      if (res.fit) res.tau = res.fit->rate;
      res.verdict = ok ? Verdict::holds : Verdict::fails;
      return res;
    }
  }
  res.note = "unreachable";
  return res;
}

}  // namespace qsub
