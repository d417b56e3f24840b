#pragma once

// Turns a validated ExperimentConfig into runtime objects, executes the run,
// evaluates the requested checks, and writes the trace CSV plus the JSON
// verification report.
//
// Exit-code contract: 0 = every requested check passed; 2 = at least one
// check failed, aborted, or turned out inapplicable; 1 = configuration or
// runtime error (unreadable config, missing output directory, I/O failure).

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qsub/analysis.hpp"
#include "qsub/config.hpp"
#include "qsub/problems.hpp"
#include "qsub/solvers.hpp"
#include "qsub/stepsizes.hpp"

namespace qsub {

struct RunOptions {
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;  // overrides run.seed when set
  bool quiet = false;
};

// ---------------------------------------------------------------------------
// Config -> runtime objects
// ---------------------------------------------------------------------------

inline FeasibleSet build_feasible(const FeasibleConfig& fc) {
  if (fc.type == "box") return FeasibleSet::box(fc.lower, fc.upper);
  if (fc.type == "ball") return FeasibleSet::ball(fc.center, fc.radius);
  if (fc.type == "halfspace") {
    return FeasibleSet::halfspace(fc.normal, fc.offset);
  }
  return FeasibleSet::whole_space(static_cast<std::size_t>(fc.dim));
}

inline ProblemInstance build_problem(const ProblemConfig& pc) {
  FeasibleSet feasible = build_feasible(pc.feasible);
  if (pc.family == "power_norm") {
    return make_power_norm(pc.family, pc.center, pc.p, pc.modulus, feasible,
                           pc.holder, pc.sharp);
  }
  if (pc.family == "piecewise_power") {
    return make_piecewise_power(pc.family, pc.center, pc.p, pc.q, feasible,
                                pc.holder, pc.sharp);
  }
  return make_linear_fractional(pc.family, pc.num_coeff, pc.num_offset,
                                pc.den_coeff, pc.den_offset, feasible,
                                pc.optimal_value, pc.optimal_point, pc.holder,
                                pc.sharp);
}

inline SolverKind build_solver(const SolverConfig& sc) {
  if (sc.kind == "inexact") return SolverKind::inexact(sc.epsilon, sc.tilt);
  if (sc.kind == "conditional") return SolverKind::conditional();
  return SolverKind::standard();
}

inline StepsizeRule build_rule(const StepsizeConfig& sc,
                               const ProblemInstance& pb, double eps) {
  if (sc.rule == "constant") return StepsizeRule::constant(sc.v);
  if (sc.rule == "diminishing") return StepsizeRule::diminishing(sc.c, sc.s);
  double target = sc.target ? *sc.target : pb.optimal_value + eps;
  return StepsizeRule::dynamic({sc.lambda_odd, sc.lambda_even}, target,
                               pb.holder.order);
}

// ---------------------------------------------------------------------------
// Trace CSV
// ---------------------------------------------------------------------------

namespace detail {

inline std::string fmt17(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace detail

inline bool emit_trace(const IterationTrace& trace, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) return false;
  out << "k,f_value,gap,dist,dist_sq,stepsize,step_length,h1_residual\n";
  for (const auto& rec : trace.records) {
    out << rec.k << ',' << detail::fmt17(rec.f_value) << ','
        << detail::fmt17(rec.gap) << ',' << detail::fmt17(rec.dist) << ','
        << detail::fmt17(rec.dist * rec.dist) << ','
        << detail::fmt17(rec.stepsize) << ','
        << detail::fmt17(rec.step_length) << ','
        << detail::fmt17(rec.h1_residual) << '\n';
  }
  return static_cast<bool>(out);
}

// ---------------------------------------------------------------------------
// Check evaluation
// ---------------------------------------------------------------------------

struct CheckOutcome {
  std::string id;
  std::string status;  // pass | fail | inapplicable | aborted
  nlohmann::ordered_json fields;
  std::map<std::string, double> params;
  bool holds() const { return status == "pass"; }
};

namespace detail {

inline double param_or(const CheckSpec& spec, const std::string& key,
                       double fallback) {
  auto it = spec.params.find(key);
  return it == spec.params.end() ? fallback : it->second;
}

inline nlohmann::ordered_json fit_fields(const RateFit& fit) {
  nlohmann::ordered_json f;
  f["model"] = fit.model == RateFit::Model::geometric ? "geometric" : "power";
  f["rate"] = fit.rate;
  f["amplitude"] = fit.amplitude;
  f["floor"] = fit.floor;
  f["r_squared"] = fit.r_squared;
  f["window_first"] = fit.window_first;
  f["window_last"] = fit.window_last;
  f["reliable"] = fit.reliable;
  return f;
}

inline nlohmann::ordered_json sweep_fields(const SweepReport& rep) {
  nlohmann::ordered_json f;
  f["trials"] = rep.trials;
  f["violating_trials"] = rep.violating_trials;
  f["worst_margin"] = rep.worst_margin;
  if (rep.has_example) {
    f["example"] = {{"u1", rep.ex_u1},     {"a", rep.ex_a},
                    {"b", rep.ex_b},       {"param", rep.ex_param},
                    {"k", rep.ex_k},       {"value", rep.ex_value},
                    {"bound", rep.ex_bound}};
  }
  return f;
}

inline CheckOutcome run_condition_check(const CheckSpec& spec,
                                        const IterationTrace& trace) {
  CheckOutcome out{spec.id, "fail", {}, spec.params};
  double tol = param_or(spec, "tol", spec.id == "h1" ? 1e-9 : 1e-10);
  ConditionCheck ck =
      spec.id == "h1" ? check_h1(trace, tol) : check_h3(trace, tol);
  out.status = ck.holds ? "pass" : "fail";
  out.fields["max_residual"] = ck.max_residual;
  out.fields["vacuous"] = ck.vacuous;
  out.fields["tol"] = ck.tol;
  return out;
}

inline CheckOutcome run_complexity_check(const CheckSpec& spec,
                                         const IterationTrace& trace,
                                         const ProblemInstance& pb,
                                         const StepsizeRule& rule,
                                         const Vec& x1) {
  CheckOutcome out{spec.id, "fail", {}, spec.params};
  auto kind = spec.id == "k1"   ? ComplexityReport::Kind::k1
              : spec.id == "k2" ? ComplexityReport::Kind::k2
                                : ComplexityReport::Kind::k3;
  double delta = param_or(spec, "delta", 0.0);
  double tol = param_or(spec, "tol", 1e-9);
  try {
    ComplexityReport rep =
        complexity_budget(kind, pb, rule, trace.constants, delta, x1);
    rep = check_complexity(trace, pb, rule, rep, tol);
    out.status = rep.holds ? "pass" : "fail";
    out.fields["budget"] = rep.budget;
    out.fields["budget_real"] = rep.budget_real;
    out.fields["value_bound"] = rep.value_bound;
    out.fields["achieved_min"] = rep.achieved_min;
    out.fields["delta"] = rep.delta;
  } catch (const std::exception& e) {
    out.status = "aborted";
    out.fields["note"] = e.what();
  }
  return out;
}

inline CheckOutcome run_envelope_check(const CheckSpec& spec,
                                       const IterationTrace& trace,
                                       const ProblemInstance& pb) {
  CheckOutcome out{spec.id, "fail", {}, spec.params};
  EnvelopeOptions opts;
  if (spec.params.count("N")) {
    opts.N = static_cast<long>(param_or(spec, "N", 1.0));
  }
  if (spec.params.count("q")) opts.q = param_or(spec, "q", 0.0);
  if (spec.params.count("eta")) opts.eta = param_or(spec, "eta", 0.0);
  if (spec.params.count("r")) opts.radius = param_or(spec, "r", 0.0);
  opts.tol = param_or(spec, "tol", 1e-9);
  EnvelopeResult res =
      envelope_check(trace, pb, *theorem_from_id(spec.id), opts);
  switch (res.verdict) {
    case Verdict::holds: out.status = "pass"; break;
    case Verdict::fails: out.status = "fail"; break;
    case Verdict::inapplicable: out.status = "inapplicable"; break;
    case Verdict::certificate_radius_exceeded: out.status = "aborted"; break;
  }
  out.fields["verdict"] = to_string(res.verdict);
  out.fields["N"] = res.N;
  out.fields["floor"] = res.floor;
  out.fields["tau"] = res.tau;
  out.fields["envelope_coeff"] = res.envelope_coeff;
  out.fields["worst_violation"] = res.worst_violation;
  if (res.fit) out.fields["fit"] = fit_fields(*res.fit);
  if (!res.note.empty()) out.fields["note"] = res.note;
  return out;
}

inline CheckOutcome run_sweep_check(const CheckSpec& spec) {
  CheckOutcome out{spec.id, "fail", {}, spec.params};
  long draws = static_cast<long>(param_or(spec, "draws", 100.0));
  long steps = static_cast<long>(param_or(spec, "steps", 10000.0));
  auto seed = static_cast<std::uint64_t>(param_or(spec, "seed", 1.0));
  double tol = param_or(spec, "tol", 1e-9);
  SweepReport power = sweep_recursion_power(draws, steps, seed, false, tol);
  SweepReport power_b = sweep_recursion_power(draws, steps, seed, true, tol);
  SweepReport stated =
      sweep_recursion_diminishing_stated(draws, steps, seed, tol);
  SweepReport envelope =
      sweep_recursion_diminishing_envelope(draws, steps, seed, tol);
  bool ok = power.violating_trials == 0 && power_b.violating_trials == 0 &&
            stated.violating_trials == 0 && envelope.violating_trials == 0;
  out.status = ok ? "pass" : "fail";
  out.fields["power"] = sweep_fields(power);
  out.fields["power_with_offset"] = sweep_fields(power_b);
  out.fields["decaying_stated"] = sweep_fields(stated);
  out.fields["decaying_envelope"] = sweep_fields(envelope);
  return out;
}

}  // namespace detail

inline CheckOutcome evaluate_check(const CheckSpec& spec,
                                   const IterationTrace& trace,
                                   const ProblemInstance& pb,
                                   const StepsizeRule& rule, const Vec& x1) {
  if (spec.id == "h1" || spec.id == "h3") {
    return detail::run_condition_check(spec, trace);
  }
  if (spec.id == "k1" || spec.id == "k2" || spec.id == "k3") {
    return detail::run_complexity_check(spec, trace, pb, rule, x1);
  }
  if (spec.id == "lemma_sweeps") return detail::run_sweep_check(spec);
  return detail::run_envelope_check(spec, trace, pb);
}

// ---------------------------------------------------------------------------
// Report JSON
// ---------------------------------------------------------------------------

inline bool emit_report(const ExperimentConfig& cfg,
                        const std::vector<CheckOutcome>& outcomes,
                        const std::string& path) {
  nlohmann::ordered_json rep;
  rep["experiment"] = cfg.name;
  rep["config"] = nlohmann::ordered_json::parse(print_config(cfg));
  nlohmann::ordered_json checks = nlohmann::ordered_json::array();
  bool all_pass = true;
  for (const auto& oc : outcomes) {
    nlohmann::ordered_json c;
    c["id"] = oc.id;
    c["status"] = oc.status;
    c["holds"] = oc.holds();
    nlohmann::ordered_json params = nlohmann::ordered_json::object();
    for (const auto& [k, v] : oc.params) params[k] = v;
    c["params"] = params;
    for (auto it = oc.fields.begin(); it != oc.fields.end(); ++it) {
      c[it.key()] = it.value();
    }
    checks.push_back(c);
    all_pass = all_pass && oc.holds();
  }
  rep["checks"] = checks;
  rep["summary"] = all_pass ? "pass" : "fail";
  std::ofstream out(path, std::ios::binary);
  if (!out) return false;
  out << rep.dump(2) << '\n';
  return static_cast<bool>(out);
}

// ---------------------------------------------------------------------------
// Experiment driver
// ---------------------------------------------------------------------------

inline int run_experiment(const ExperimentConfig& input,
                          const RunOptions& opts) {
  ExperimentConfig cfg = input;
  if (opts.seed) cfg.run.seed = *opts.seed;

  namespace fs = std::filesystem;
  if (!fs::exists(opts.out_dir) || !fs::is_directory(opts.out_dir)) {
    std::cerr << "output directory does not exist: " << opts.out_dir << "\n";
    return 1;
  }

  std::optional<ProblemInstance> pb;
  std::optional<SolverKind> kind;
  std::optional<StepsizeRule> rule;
  try {
    pb = build_problem(cfg.problem);
    kind = build_solver(cfg.solver);
    rule = build_rule(cfg.stepsize, *pb, cfg.solver.epsilon);
  } catch (const std::exception& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 1;
  }

  RunConfig rc;
  rc.x1 = cfg.run.x1;
  rc.max_iter = cfg.run.max_iter;
  rc.gap_stop = cfg.run.gap_stop;
  rc.record_points = cfg.run.record_points;
  rc.seed = cfg.run.seed;

  std::optional<IterationTrace> trace;
  try {
    trace = run(*pb, *kind, *rule, rc);
  } catch (const std::exception& e) {
    std::cerr << "runtime error: " << e.what() << "\n";
    return 1;
  }

  std::string base = opts.out_dir + "/" + cfg.name;
  if (!emit_trace(*trace, base + ".trace.csv")) {
    std::cerr << "cannot write trace: " << base << ".trace.csv\n";
    return 1;
  }

  std::vector<CheckOutcome> outcomes;
  for (const auto& spec : cfg.checks) {
    outcomes.push_back(evaluate_check(spec, *trace, *pb, *rule, cfg.run.x1));
  }
  if (!emit_report(cfg, outcomes, base + ".report.json")) {
    std::cerr << "cannot write report: " << base << ".report.json\n";
    return 1;
  }

  bool all_pass = true;
  for (const auto& oc : outcomes) {
    if (!opts.quiet) std::cout << oc.id << ": " << oc.status << "\n";
    all_pass = all_pass && oc.holds();
  }
  if (!opts.quiet) {
    std::cout << "summary: " << (all_pass ? "pass" : "fail") << "\n";
    std::cout << "wrote " << base << ".trace.csv and " << base
              << ".report.json\n";
  }
  return all_pass ? 0 : 2;
}

}  // namespace qsub
