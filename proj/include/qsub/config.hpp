#pragma once

// Experiment configuration: a JSON document with typed sections
// (name, problem, solver, stepsize, run, checks). Parsing validates every
// field and collects all errors; printing emits a canonical form such that
// parse(print(config)) reproduces the config exactly.

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "qsub/linalg.hpp"
#include "qsub/problems.hpp"

namespace qsub {

struct CheckSpec {
  std::string id;
  std::map<std::string, double> params;  // sorted keys: canonical order
};

struct SolverConfig {
  std::string kind = "standard";  // standard | inexact | conditional
  double epsilon = 0.0;
  double tilt = 0.0;
};

struct StepsizeConfig {
  std::string rule;  // constant | diminishing | dynamic
  double v = 0.0;                               // constant
  double c = 0.0;                               // diminishing
  double s = 0.0;                               // diminishing
  double lambda_odd = 0.0, lambda_even = 0.0;   // dynamic
  std::optional<double> target;                 // dynamic stop level override
};

struct FeasibleConfig {
  std::string type;  // box | ball | halfspace | whole_space
  Vec lower, upper;           // box
  Vec center;                 // ball
  double radius = 0.0;        // ball
  Vec normal;                 // halfspace
  double offset = 0.0;        // halfspace
  long dim = 0;               // whole_space
};

struct ProblemConfig {
  std::string family;  // power_norm | piecewise_power | linear_fractional
  // power_norm / piecewise_power
  Vec center;
  double p = 1.0;        // power_norm exponent / piecewise outer exponent
  double modulus = 1.0;  // power_norm scale
  double q = 1.0;        // piecewise inner exponent
  // linear_fractional
  Vec num_coeff;
  double num_offset = 0.0;
  Vec den_coeff;
  double den_offset = 0.0;
  double optimal_value = 0.0;
  Vec optimal_point;
  FeasibleConfig feasible;
  HolderCertificate holder;
  std::optional<SharpCertificate> sharp;
};

struct RunSection {
  Vec x1;
  long max_iter = 1;
  std::optional<double> gap_stop;
  std::uint64_t seed = 0;
  bool record_points = false;
};

struct ExperimentConfig {
  std::string name;
  ProblemConfig problem;
  SolverConfig solver;
  StepsizeConfig stepsize;
  RunSection run;
  std::vector<CheckSpec> checks;
};

struct FieldError {
  std::string path;
  std::string message;
};

struct ParseResult {
  std::optional<ExperimentConfig> config;
  std::vector<FieldError> errors;
  bool ok() const { return config.has_value() && errors.empty(); }
};

// ---------------------------------------------------------------------------
// Check-id registry
// ---------------------------------------------------------------------------

inline const std::vector<std::string>& check_ids() {
  static const std::vector<std::string> ids = {
      "h1",      "h3",      "k1",      "k2",     "k3",
      "t3.3i",   "t3.3ii",  "t3.4i",   "t3.4ii", "t3.4iii",
      "t3.5i",   "t3.5ii",  "lemma_sweeps"};
  return ids;
}

// Stepsize rule a check is tied to; empty when any rule is acceptable.
inline std::string rule_for_check(const std::string& id) {
  if (id == "k1" || id == "t3.3i" || id == "t3.3ii") return "constant";
  if (id == "k2" || id == "t3.5i" || id == "t3.5ii") return "diminishing";
  if (id == "k3" || id == "t3.4i" || id == "t3.4ii" || id == "t3.4iii") {
    return "dynamic";
  }
  return "";
}

inline std::set<std::string> allowed_check_params(const std::string& id) {
  if (id == "h1" || id == "h3") return {"tol"};
  if (id == "k1" || id == "k2" || id == "k3") return {"delta", "tol"};
  if (id == "lemma_sweeps") return {"draws", "steps", "seed", "tol"};
  return {"N", "q", "eta", "r", "tol"};  // envelope checks
}

// ---------------------------------------------------------------------------
// Canonical printing
// ---------------------------------------------------------------------------

inline std::string print_config(const ExperimentConfig& cfg) {
  using json = nlohmann::ordered_json;
  json j;
  j["name"] = cfg.name;

  json pb;
  pb["family"] = cfg.problem.family;
  if (cfg.problem.family == "linear_fractional") {
    pb["numerator"] = {{"coeff", cfg.problem.num_coeff},
                       {"offset", cfg.problem.num_offset}};
    pb["denominator"] = {{"coeff", cfg.problem.den_coeff},
                         {"offset", cfg.problem.den_offset}};
    pb["optimal_value"] = cfg.problem.optimal_value;
    pb["optimal_point"] = cfg.problem.optimal_point;
  } else {
    pb["center"] = cfg.problem.center;
    pb["p"] = cfg.problem.p;
    if (cfg.problem.family == "power_norm") {
      pb["modulus"] = cfg.problem.modulus;
    } else {
      pb["q"] = cfg.problem.q;
    }
  }
  json fs;
  fs["type"] = cfg.problem.feasible.type;
  if (cfg.problem.feasible.type == "box") {
    fs["lower"] = cfg.problem.feasible.lower;
    fs["upper"] = cfg.problem.feasible.upper;
  } else if (cfg.problem.feasible.type == "ball") {
    fs["center"] = cfg.problem.feasible.center;
    fs["radius"] = cfg.problem.feasible.radius;
  } else if (cfg.problem.feasible.type == "halfspace") {
    fs["normal"] = cfg.problem.feasible.normal;
    fs["offset"] = cfg.problem.feasible.offset;
  } else {
    fs["dim"] = cfg.problem.feasible.dim;
  }
  pb["feasible"] = fs;
  pb["holder"] = {{"order", cfg.problem.holder.order},
                  {"modulus", cfg.problem.holder.modulus}};
  if (cfg.problem.sharp) {
    pb["sharp"] = {{"order", cfg.problem.sharp->order},
                   {"modulus", cfg.problem.sharp->modulus},
                   {"radius", cfg.problem.sharp->radius}};
  }
  j["problem"] = pb;

  j["solver"] = {{"kind", cfg.solver.kind},
                 {"epsilon", cfg.solver.epsilon},
                 {"tilt", cfg.solver.tilt}};

  json st;
  st["rule"] = cfg.stepsize.rule;
  if (cfg.stepsize.rule == "constant") {
    st["v"] = cfg.stepsize.v;
  } else if (cfg.stepsize.rule == "diminishing") {
    st["c"] = cfg.stepsize.c;
    st["s"] = cfg.stepsize.s;
  } else {
    if (cfg.stepsize.lambda_odd == cfg.stepsize.lambda_even) {
      st["lambda"] = cfg.stepsize.lambda_odd;
    } else {
      st["lambda_odd"] = cfg.stepsize.lambda_odd;
      st["lambda_even"] = cfg.stepsize.lambda_even;
    }
    if (cfg.stepsize.target) st["target"] = *cfg.stepsize.target;
  }
  j["stepsize"] = st;

  json run;
  run["x1"] = cfg.run.x1;
  run["max_iter"] = cfg.run.max_iter;
  if (cfg.run.gap_stop) run["gap_stop"] = *cfg.run.gap_stop;
  run["seed"] = cfg.run.seed;
  run["record_points"] = cfg.run.record_points;
  j["run"] = run;

  json checks = json::array();
  for (const auto& ck : cfg.checks) {
    json c;
    c["id"] = ck.id;
    for (const auto& [k, val] : ck.params) c[k] = val;
    checks.push_back(c);
  }
  j["checks"] = checks;
  return j.dump(2) + "\n";
}

inline bool operator==(const ExperimentConfig& a, const ExperimentConfig& b) {
  return print_config(a) == print_config(b);
}

// ---------------------------------------------------------------------------
// Parsing with collected field errors
// ---------------------------------------------------------------------------

namespace detail {

class Field {
 public:
  Field(const nlohmann::json& j, std::string path, std::vector<FieldError>& errs)
      : j_(&j), path_(std::move(path)), errs_(&errs) {}

  void error(const std::string& key, const std::string& msg) const {
    errs_->push_back({path_.empty() ? key : path_ + "." + key, msg});
  }

  bool has(const std::string& key) const { return j_->contains(key); }

  void reject_unknown(const std::set<std::string>& allowed) const {
    for (auto it = j_->begin(); it != j_->end(); ++it) {
      if (!allowed.count(it.key())) error(it.key(), "unknown key");
    }
  }

  const nlohmann::json* object(const std::string& key, bool required) const {
    if (!j_->contains(key)) {
      if (required) error(key, "missing required section");
      return nullptr;
    }
    if (!(*j_)[key].is_object()) {
      error(key, "must be an object");
      return nullptr;
    }
    return &(*j_)[key];
  }

  std::string text(const std::string& key, const std::string& fallback,
                   bool required) const {
    if (!j_->contains(key)) {
      if (required) error(key, "missing required string");
      return fallback;
    }
    if (!(*j_)[key].is_string()) {
      error(key, "must be a string");
      return fallback;
    }
    return (*j_)[key].get<std::string>();
  }

  double number(const std::string& key, double fallback, bool required) const {
    if (!j_->contains(key)) {
      if (required) error(key, "missing required number");
      return fallback;
    }
    if (!(*j_)[key].is_number()) {
      error(key, "must be a number");
      return fallback;
    }
    return (*j_)[key].get<double>();
  }

  long integer(const std::string& key, long fallback, bool required) const {
    if (!j_->contains(key)) {
      if (required) error(key, "missing required integer");
      return fallback;
    }
    if (!(*j_)[key].is_number_integer()) {
      error(key, "must be an integer");
      return fallback;
    }
    return (*j_)[key].get<long>();
  }

  bool boolean(const std::string& key, bool fallback) const {
    if (!j_->contains(key)) return fallback;
    if (!(*j_)[key].is_boolean()) {
      error(key, "must be a boolean");
      return fallback;
    }
    return (*j_)[key].get<bool>();
  }

  Vec vector(const std::string& key, bool required) const {
    if (!j_->contains(key)) {
      if (required) error(key, "missing required numeric array");
      return {};
    }
    const auto& arr = (*j_)[key];
    if (!arr.is_array() || arr.empty()) {
      error(key, "must be a non-empty numeric array");
      return {};
    }
    Vec v;
    for (const auto& e : arr) {
      if (!e.is_number()) {
        error(key, "must contain only numbers");
        return {};
      }
      v.push_back(e.get<double>());
    }
    return v;
  }

  std::string path_of(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  const nlohmann::json& raw() const { return *j_; }

 private:
  const nlohmann::json* j_;
  std::string path_;
  std::vector<FieldError>* errs_;
};

inline void parse_feasible(const nlohmann::json& j, const std::string& path,
                           FeasibleConfig& out, std::vector<FieldError>& errs) {
  Field f(j, path, errs);
  out.type = f.text("type", "", true);
  if (out.type == "box") {
    f.reject_unknown({"type", "lower", "upper"});
    out.lower = f.vector("lower", true);
    out.upper = f.vector("upper", true);
    if (!out.lower.empty() && out.lower.size() != out.upper.size()) {
      f.error("upper", "must have the same dimension as lower");
    }
    for (std::size_t i = 0; i < std::min(out.lower.size(), out.upper.size());
         ++i) {
      if (out.lower[i] > out.upper[i]) {
        f.error("lower", "component exceeds the upper bound");
        break;
      }
    }
  } else if (out.type == "ball") {
    f.reject_unknown({"type", "center", "radius"});
    out.center = f.vector("center", true);
    out.radius = f.number("radius", 0.0, true);
    if (f.has("radius") && !(out.radius > 0.0)) {
      f.error("radius", "must be positive");
    }
  } else if (out.type == "halfspace") {
    f.reject_unknown({"type", "normal", "offset"});
    out.normal = f.vector("normal", true);
    out.offset = f.number("offset", 0.0, true);
    if (!out.normal.empty() && norm(out.normal) == 0.0) {
      f.error("normal", "must be nonzero");
    }
  } else if (out.type == "whole_space") {
    f.reject_unknown({"type", "dim"});
    out.dim = f.integer("dim", 0, true);
    if (f.has("dim") && out.dim < 1) f.error("dim", "must be at least 1");
  } else if (!out.type.empty()) {
    f.error("type", "unknown feasible-set type '" + out.type + "'");
  }
}

inline std::size_t feasible_dim(const FeasibleConfig& fc) {
  if (fc.type == "box") return fc.lower.size();
  if (fc.type == "ball") return fc.center.size();
  if (fc.type == "halfspace") return fc.normal.size();
  if (fc.type == "whole_space") return static_cast<std::size_t>(fc.dim);
  return 0;
}

inline void parse_problem(const nlohmann::json& j, ProblemConfig& out,
                          std::vector<FieldError>& errs) {
  Field f(j, "problem", errs);
  out.family = f.text("family", "", true);
  bool radial = out.family == "power_norm" || out.family == "piecewise_power";
  if (out.family == "power_norm") {
    f.reject_unknown({"family", "center", "p", "modulus", "feasible", "holder",
                      "sharp"});
    out.center = f.vector("center", true);
    out.p = f.number("p", 1.0, true);
    out.modulus = f.number("modulus", 1.0, false);
    if (f.has("p") && !(out.p > 0.0 && out.p <= 1.0)) {
      f.error("p", "must lie in (0, 1]");
    }
    if (!(out.modulus > 0.0)) f.error("modulus", "must be positive");
  } else if (out.family == "piecewise_power") {
    f.reject_unknown({"family", "center", "p", "q", "feasible", "holder",
                      "sharp"});
    out.center = f.vector("center", true);
    out.p = f.number("p", 1.0, true);
    out.q = f.number("q", 1.0, true);
    if (f.has("p") && !(out.p > 0.0 && out.p <= 1.0)) {
      f.error("p", "must lie in (0, 1]");
    }
    if (f.has("q") && !(out.q >= out.p)) {
      f.error("q", "must be at least p");
    }
  } else if (out.family == "linear_fractional") {
    f.reject_unknown({"family", "numerator", "denominator", "optimal_value",
                      "optimal_point", "feasible", "holder", "sharp"});
    if (const auto* num = f.object("numerator", true)) {
      Field fn(*num, "problem.numerator", errs);
      fn.reject_unknown({"coeff", "offset"});
      out.num_coeff = fn.vector("coeff", true);
      out.num_offset = fn.number("offset", 0.0, true);
    }
    if (const auto* den = f.object("denominator", true)) {
      Field fd(*den, "problem.denominator", errs);
      fd.reject_unknown({"coeff", "offset"});
      out.den_coeff = fd.vector("coeff", true);
      out.den_offset = fd.number("offset", 0.0, true);
    }
    out.optimal_value = f.number("optimal_value", 0.0, true);
    out.optimal_point = f.vector("optimal_point", true);
    if (!out.num_coeff.empty() && !out.den_coeff.empty() &&
        out.num_coeff.size() != out.den_coeff.size()) {
      f.error("denominator", "coefficient dimension mismatch");
    }
  } else if (!out.family.empty()) {
    f.error("family", "unknown objective family '" + out.family + "'");
  }

  if (const auto* fs = f.object("feasible", true)) {
    parse_feasible(*fs, "problem.feasible", out.feasible, errs);
  }

  if (const auto* h = f.object("holder", out.family == "linear_fractional")) {
    Field fh(*h, "problem.holder", errs);
    fh.reject_unknown({"order", "modulus"});
    out.holder.order = fh.number("order", 1.0, true);
    out.holder.modulus = fh.number("modulus", 1.0, true);
  } else if (radial) {
    // Natural default: the objective family satisfies its own growth bound.
    out.holder.order = out.p;
    out.holder.modulus = out.family == "power_norm" ? out.modulus : 1.0;
  }
  if (!(out.holder.order > 0.0 && out.holder.order <= 1.0)) {
    f.error("holder", "order must lie in (0, 1]");
  }
  if (!(out.holder.modulus > 0.0)) {
    f.error("holder", "modulus must be positive");
  }

  if (f.has("sharp")) {
    if (const auto* sh = f.object("sharp", false)) {
      Field fsp(*sh, "problem.sharp", errs);
      fsp.reject_unknown({"order", "modulus", "radius"});
      SharpCertificate cert;
      cert.order = fsp.number("order", 1.0, true);
      cert.modulus = fsp.number("modulus", 1.0, true);
      cert.radius = fsp.number("radius", 1.0, true);
      if (!(cert.order > 0.0)) fsp.error("order", "must be positive");
      if (!(cert.modulus > 0.0)) fsp.error("modulus", "must be positive");
      if (!(cert.radius > 0.0)) fsp.error("radius", "must be positive");
      out.sharp = cert;
    }
  }

  // Dimension coherence within the problem section.
  std::size_t dim = radial ? out.center.size() : out.num_coeff.size();
  std::size_t fdim = feasible_dim(out.feasible);
  if (dim > 0 && fdim > 0 && dim != fdim) {
    f.error("feasible", "dimension differs from the objective's");
  }
  if (out.family == "linear_fractional" && dim > 0 &&
      !out.optimal_point.empty() && out.optimal_point.size() != dim) {
    f.error("optimal_point", "dimension differs from the objective's");
  }
}

inline void parse_solver(const nlohmann::json& j, SolverConfig& out,
                         std::vector<FieldError>& errs) {
  Field f(j, "solver", errs);
  f.reject_unknown({"kind", "epsilon", "tilt"});
  out.kind = f.text("kind", "standard", true);
  out.epsilon = f.number("epsilon", 0.0, false);
  out.tilt = f.number("tilt", 0.0, false);
  if (out.kind == "inexact") {
    if (!(out.epsilon > 0.0)) f.error("epsilon", "inexact solver requires epsilon > 0");
    if (!(out.tilt >= 0.0 && out.tilt <= 1.0)) {
      f.error("tilt", "must lie in [0, 1]");
    }
  } else if (out.kind == "standard" || out.kind == "conditional") {
    if (out.epsilon != 0.0) {
      f.error("epsilon", "only the inexact solver takes epsilon");
    }
    if (out.tilt != 0.0) f.error("tilt", "only the inexact solver takes tilt");
  } else {
    f.error("kind", "unknown solver kind '" + out.kind + "'");
  }
}

inline void parse_stepsize(const nlohmann::json& j, StepsizeConfig& out,
                           std::vector<FieldError>& errs) {
  Field f(j, "stepsize", errs);
  out.rule = f.text("rule", "", true);
  if (out.rule == "constant") {
    f.reject_unknown({"rule", "v"});
    out.v = f.number("v", 0.0, true);
    if (f.has("v") && !(out.v > 0.0)) f.error("v", "must be positive");
  } else if (out.rule == "diminishing") {
    f.reject_unknown({"rule", "c", "s"});
    out.c = f.number("c", 0.0, true);
    out.s = f.number("s", 0.0, true);
    if (f.has("c") && !(out.c > 0.0)) f.error("c", "must be positive");
    if (f.has("s") && !(out.s > 0.0 && out.s < 1.0)) {
      f.error("s", "must lie in (0, 1)");
    }
  } else if (out.rule == "dynamic") {
    f.reject_unknown({"rule", "lambda", "lambda_odd", "lambda_even", "target"});
    bool single = f.has("lambda");
    bool split = f.has("lambda_odd") || f.has("lambda_even");
    if (single && split) {
      f.error("lambda", "give either lambda or the odd/even pair, not both");
    } else if (single) {
      out.lambda_odd = out.lambda_even = f.number("lambda", 0.0, true);
    } else if (f.has("lambda_odd") && f.has("lambda_even")) {
      out.lambda_odd = f.number("lambda_odd", 0.0, true);
      out.lambda_even = f.number("lambda_even", 0.0, true);
    } else {
      f.error("lambda", "missing relaxation factor");
    }
    for (double l : {out.lambda_odd, out.lambda_even}) {
      if ((single || split) && !(l > 0.0 && l < 2.0)) {
        f.error("lambda", "must lie in (0, 2)");
        break;
      }
    }
    if (f.has("target")) out.target = f.number("target", 0.0, false);
  } else if (!out.rule.empty()) {
    f.error("rule", "unknown stepsize rule '" + out.rule + "'");
  }
}

inline void parse_run(const nlohmann::json& j, RunSection& out,
                      std::vector<FieldError>& errs) {
  Field f(j, "run", errs);
  f.reject_unknown({"x1", "max_iter", "gap_stop", "seed", "record_points"});
  out.x1 = f.vector("x1", true);
  out.max_iter = f.integer("max_iter", 1, true);
  if (f.has("max_iter") && out.max_iter < 1) {
    f.error("max_iter", "must be at least 1");
  }
  if (f.has("gap_stop")) out.gap_stop = f.number("gap_stop", 0.0, false);
  long seed = f.integer("seed", 0, false);
  if (seed < 0) {
    f.error("seed", "must be nonnegative");
  } else {
    out.seed = static_cast<std::uint64_t>(seed);
  }
  out.record_points = f.boolean("record_points", false);
}

inline void parse_checks(const nlohmann::json& j, const std::string& rule,
                         std::vector<CheckSpec>& out,
                         std::vector<FieldError>& errs) {
  if (!j.is_array()) {
    errs.push_back({"checks", "must be an array"});
    return;
  }
  for (std::size_t i = 0; i < j.size(); ++i) {
    std::string path = "checks[" + std::to_string(i) + "]";
    const auto& e = j[i];
    if (!e.is_object()) {
      errs.push_back({path, "must be an object"});
      continue;
    }
    Field f(e, path, errs);
    CheckSpec spec;
    spec.id = f.text("id", "", true);
    const auto& ids = check_ids();
    if (std::find(ids.begin(), ids.end(), spec.id) == ids.end()) {
      if (!spec.id.empty()) f.error("id", "unknown check id '" + spec.id + "'");
      continue;
    }
    std::string needed = rule_for_check(spec.id);
    if (!needed.empty() && !rule.empty() && rule != needed) {
      errs.push_back({path, spec.id + " requires " + needed + " rule"});
    }
    std::set<std::string> allowed = allowed_check_params(spec.id);
    for (auto it = e.begin(); it != e.end(); ++it) {
      if (it.key() == "id") continue;
      if (!allowed.count(it.key())) {
        f.error(it.key(), "unknown parameter for check " + spec.id);
        continue;
      }
      if (!it.value().is_number()) {
        f.error(it.key(), "must be a number");
        continue;
      }
      spec.params[it.key()] = it.value().get<double>();
    }
    if ((spec.id == "k1" || spec.id == "k2" || spec.id == "k3") &&
        !spec.params.count("delta")) {
      f.error("delta", "required by check " + spec.id);
    }
    if (spec.params.count("delta") && !(spec.params["delta"] > 0.0)) {
      f.error("delta", "must be positive");
    }
    out.push_back(std::move(spec));
  }
}

}  // namespace detail

inline ParseResult parse_config(const std::string& text) {
  ParseResult res;
  nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
  if (j.is_discarded()) {
    res.errors.push_back({"", "not a well-formed JSON document"});
    return res;
  }
  if (!j.is_object()) {
    res.errors.push_back({"", "top level must be an object"});
    return res;
  }
  ExperimentConfig cfg;
  auto& errs = res.errors;
  detail::Field f(j, "", errs);
  f.reject_unknown({"name", "problem", "solver", "stepsize", "run", "checks"});
  cfg.name = f.text("name", "", true);
  if (f.has("name") && cfg.name.empty()) {
    errs.push_back({"name", "must be non-empty"});
  }
  if (const auto* pb = f.object("problem", true)) {
    detail::parse_problem(*pb, cfg.problem, errs);
  }
  if (const auto* sv = f.object("solver", true)) {
    detail::parse_solver(*sv, cfg.solver, errs);
  }
  if (const auto* st = f.object("stepsize", true)) {
    detail::parse_stepsize(*st, cfg.stepsize, errs);
  }
  if (const auto* rn = f.object("run", true)) {
    detail::parse_run(*rn, cfg.run, errs);
    std::size_t dim = detail::feasible_dim(cfg.problem.feasible);
    if (!cfg.run.x1.empty() && dim > 0 && cfg.run.x1.size() != dim) {
      errs.push_back({"run.x1", "dimension differs from the problem's"});
    }
  }
  if (f.has("checks")) {
    detail::parse_checks(j["checks"], cfg.stepsize.rule, cfg.checks, errs);
  }
  if (errs.empty()) res.config = std::move(cfg);
  return res;
}

}  // namespace qsub
