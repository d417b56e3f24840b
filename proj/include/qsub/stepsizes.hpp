#pragma once

// Stepsize rules and the growth/descent constants they are paired with.
//
// The solver's one-step descent inequality has the shape
//   dist^2(x_{k+1}) <= dist^2(x_k) - alpha * v_k * (gap_k - eps)_+^{1/p}
//                      + beta * v_k^2,
// and each rule below chooses v_k against those constants:
//   constant     v_k = v
//   diminishing  v_k = c * k^{-s},            s in (0, 1)
//   dynamic      v_k = (alpha * lambda_k / (2 beta))
//                      * (f(x_k) - target)_+^{1/p}
// The dynamic relaxation factor lambda_k may alternate between an odd-step
// and an even-step value; both must stay inside (0, 2).

#include <cmath>
#include <stdexcept>
#include <variant>

#include "qsub/linalg.hpp"

namespace qsub {

// Per-run constants: alpha/beta/gamma describe one step of the method,
// alpha_inf/beta_sup are the extremes over the whole run (equal to
// alpha/beta here because the methods use constant coefficient sequences),
// eps is the oracle relaxation, p the growth order the bound is stated in.
struct FrameworkConstants {
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
  double alpha_inf = 0.0;
  double beta_sup = 0.0;
  double eps = 0.0;
  double p = 1.0;
};

struct ConstantStep {
  double v = 0.0;
};

struct DiminishingStep {
  double c = 0.0;
  double s = 0.0;
};

struct LambdaSchedule {
  double odd = 1.0;
  double even = 1.0;
};

struct DynamicStep {
  LambdaSchedule lambda;
  double target = 0.0;  // stop level, typically optimal value + eps
  double p = 1.0;       // growth order used in the stepsize exponent
};

class StepsizeRule {
 public:
  enum class Kind { constant, diminishing, dynamic };

  static StepsizeRule constant(double v) {
    if (!(v > 0.0)) {
      throw std::invalid_argument("stepsize: constant v must be positive");
    }
    return StepsizeRule(ConstantStep{v});
  }

  static StepsizeRule diminishing(double c, double s) {
    if (!(c > 0.0)) {
      throw std::invalid_argument("stepsize: diminishing c must be positive");
    }
    if (!(s > 0.0 && s < 1.0)) {
      throw std::invalid_argument("stepsize: diminishing s must lie in (0, 1)");
    }
    return StepsizeRule(DiminishingStep{c, s});
  }

  static StepsizeRule dynamic(LambdaSchedule lambda, double target, double p) {
    if (!(lambda.odd > 0.0 && lambda.odd < 2.0 && lambda.even > 0.0 &&
          lambda.even < 2.0)) {
      throw std::invalid_argument(
          "stepsize: dynamic relaxation factors must lie in (0, 2)");
    }
    if (!(p > 0.0 && p <= 1.0)) {
      throw std::invalid_argument("stepsize: dynamic p must lie in (0, 1]");
    }
    return StepsizeRule(DynamicStep{lambda, target, p});
  }

  Kind kind() const {
    if (std::holds_alternative<ConstantStep>(rep_)) return Kind::constant;
    if (std::holds_alternative<DiminishingStep>(rep_)) return Kind::diminishing;
    return Kind::dynamic;
  }

  template <class T>
  const T& as() const {
    return std::get<T>(rep_);
  }

  double lambda_lower() const {
    const auto& d = as<DynamicStep>();
    return std::min(d.lambda.odd, d.lambda.even);
  }

  double lambda_upper() const {
    const auto& d = as<DynamicStep>();
    return std::max(d.lambda.odd, d.lambda.even);
  }

 private:
  template <class T>
  explicit StepsizeRule(T rep) : rep_(rep) {}

  std::variant<ConstantStep, DiminishingStep, DynamicStep> rep_;
};

inline double stepsize(const StepsizeRule& rule, long k, double f_xk,
                       const FrameworkConstants& constants) {
  if (k < 1) throw std::invalid_argument("stepsize: iterations count from 1");
  switch (rule.kind()) {
    case StepsizeRule::Kind::constant:
      return rule.as<ConstantStep>().v;
    case StepsizeRule::Kind::diminishing: {
      const auto& d = rule.as<DiminishingStep>();
      return d.c * std::pow(static_cast<double>(k), -d.s);
    }
    case StepsizeRule::Kind::dynamic: {
      const auto& d = rule.as<DynamicStep>();
      double lambda_k = (k % 2 == 1) ? d.lambda.odd : d.lambda.even;
      double excess = std::max(0.0, f_xk - d.target);
      return constants.alpha * lambda_k / (2.0 * constants.beta) *
             powr(excess, 1.0 / d.p);
    }
  }
  throw std::logic_error("stepsize: unreachable");
}

}  // namespace qsub
