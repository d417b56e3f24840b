#pragma once

// Projected quasi-subgradient iterations. Three variants share the update
// x_{k+1} = P_X(x_k - v_k * direction):
//   standard     direction = g,        g a unit quasi-subgradient at x_k
//   inexact      direction = g,        g a relaxed (eps) quasi-subgradient
//   conditional  direction = g + mu,   mu a unit outward normal of X at x_k
//                                      (zero when x_k is interior)
// Each run records per-iteration diagnostics, including the residual of the
// one-step descent inequality, so the analysis layer can re-check every
// claimed property from the trace alone.

#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qsub/linalg.hpp"
#include "qsub/problems.hpp"
#include "qsub/rng.hpp"
#include "qsub/sets.hpp"
#include "qsub/stepsizes.hpp"

namespace qsub {

class SolverKind {
 public:
  enum class Tag { standard, inexact, conditional };

  static SolverKind standard() { return SolverKind(Tag::standard, 0.0, 0.0); }

  static SolverKind inexact(double epsilon, double tilt) {
    if (!(epsilon > 0.0)) {
      throw std::invalid_argument("inexact solver: epsilon must be positive");
    }
    if (!(tilt >= 0.0 && tilt <= 1.0)) {
      throw std::invalid_argument("inexact solver: tilt must lie in [0, 1]");
    }
    return SolverKind(Tag::inexact, epsilon, tilt);
  }

  static SolverKind conditional() {
    return SolverKind(Tag::conditional, 0.0, 0.0);
  }

  Tag tag() const { return tag_; }
  double epsilon() const { return epsilon_; }
  double tilt() const { return tilt_; }

  std::string name() const {
    switch (tag_) {
      case Tag::standard: return "standard";
      case Tag::inexact: return "inexact";
      case Tag::conditional: return "conditional";
    }
    return "?";
  }

 private:
  SolverKind(Tag tag, double epsilon, double tilt)
      : tag_(tag), epsilon_(epsilon), tilt_(tilt) {}

  Tag tag_;
  double epsilon_;
  double tilt_;
};

// Descent/step constants implied by the solver variant and the upper growth
// certificate (f - f_min <= L * dist^p).
inline FrameworkConstants framework_constants(const SolverKind& kind,
                                              const HolderCertificate& holder) {
  FrameworkConstants c;
  c.p = holder.order;
  c.alpha = 2.0 * powr(holder.modulus, -1.0 / holder.order);
  switch (kind.tag()) {
    case SolverKind::Tag::standard:
    case SolverKind::Tag::inexact:
      c.beta = 1.0;
      c.gamma = 1.0;
      break;
    case SolverKind::Tag::conditional:
      c.beta = 4.0;
      c.gamma = 2.0;
      break;
  }
  c.alpha_inf = c.alpha;
  c.beta_sup = c.beta;
  c.eps = kind.epsilon();
  return c;
}

// One update from a feasible point. Exposed separately so tests can probe
// single steps; run() below drives it.
inline Vec step(const SolverKind& kind, const ProblemInstance& pb, const Vec& x,
                double v, Rng& rng) {
  if (!contains(pb.feasible, x)) {
    throw std::invalid_argument("step: x must be feasible");
  }
  Vec direction;
  switch (kind.tag()) {
    case SolverKind::Tag::standard:
      direction = quasi_subgradient(pb, x);
      break;
    case SolverKind::Tag::inexact:
      direction = eps_quasi_subgradient(pb, x, kind.epsilon(), kind.tilt(), rng);
      break;
    case SolverKind::Tag::conditional: {
      direction = quasi_subgradient(pb, x);
      Vec mu = unit_normal(pb.feasible, x);
      direction = add(direction, mu);
      break;
    }
  }
  return project(pb.feasible, sub(x, scaled(direction, v)));
}

struct RunConfig {
  Vec x1;
  long max_iter = 1;
  std::optional<double> gap_stop;  // stop once f - f_min <= gap_stop
  bool record_points = false;
  std::uint64_t seed = 0;
};

struct IterationRecord {
  long k = 0;
  double f_value = 0.0;
  double gap = 0.0;
  double dist = 0.0;        // distance to the optimal set
  double stepsize = 0.0;    // v_k chosen by the rule
  double step_length = 0.0; // ||x_{k+1} - x_k||; 0 on the terminal row
  // Residual of the one-step descent inequality (nonpositive when it
  // holds); NaN on the terminal row and whenever gap_k <= eps, where the
  // inequality makes no claim.
  double h1_residual = std::numeric_limits<double>::quiet_NaN();
  std::optional<Vec> point;
};

enum class StopReason { max_iter, gap_stop, entered_optimal_set };

inline const char* to_string(StopReason r) {
  switch (r) {
    case StopReason::max_iter: return "max_iter";
    case StopReason::gap_stop: return "gap_stop";
    case StopReason::entered_optimal_set: return "entered_optimal_set";
  }
  return "?";
}

struct IterationTrace {
  std::string problem;
  std::optional<SolverKind> kind;  // engaged after run()
  std::optional<StepsizeRule> rule;
  FrameworkConstants constants;
  StopReason stop = StopReason::max_iter;
  std::vector<IterationRecord> records;
};

inline IterationTrace run(const ProblemInstance& pb, const SolverKind& kind,
                          const StepsizeRule& rule, const RunConfig& config) {
  if (config.max_iter < 1) {
    throw std::invalid_argument("run: max_iter must be at least 1");
  }
  IterationTrace trace;
  trace.problem = pb.name;
  trace.kind = kind;
  trace.rule = rule;
  trace.constants = framework_constants(kind, pb.holder);
  const FrameworkConstants& c = trace.constants;

  Rng rng(config.seed);
  Vec x = project(pb.feasible, config.x1);
  for (long k = 1;; ++k) {
    IterationRecord rec;
    rec.k = k;
    rec.f_value = value(pb, x);
    rec.gap = rec.f_value - pb.optimal_value;
    rec.dist = distance_to_optimum(pb, x);
    rec.stepsize = stepsize(rule, k, rec.f_value, c);
    if (config.record_points) rec.point = x;

    bool stop = false;
    if (config.gap_stop && rec.gap <= *config.gap_stop) {
      trace.stop = StopReason::gap_stop;
      stop = true;
    } else if (rule.kind() == StepsizeRule::Kind::dynamic &&
               rec.stepsize == 0.0) {
      // The dynamic rule returns exactly zero only when f has reached the
      // target level; the iterate will never move again.
      trace.stop = StopReason::entered_optimal_set;
      stop = true;
    } else if (k == config.max_iter) {
      trace.stop = StopReason::max_iter;
      stop = true;
    }
    if (stop) {
      trace.records.push_back(std::move(rec));
      return trace;
    }

    Vec next = step(kind, pb, x, rec.stepsize, rng);
    rec.step_length = dist(next, x);
    if (rec.gap > c.eps) {
      double d_next = distance_to_optimum(pb, next);
      rec.h1_residual = d_next * d_next - rec.dist * rec.dist +
                        c.alpha * rec.stepsize *
                            powr(rec.gap - c.eps, 1.0 / c.p) -
                        c.beta * rec.stepsize * rec.stepsize;
    }
    trace.records.push_back(std::move(rec));
    x = std::move(next);
  }
}

}  // namespace qsub
