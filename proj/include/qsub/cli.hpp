#pragma once

// Command-line front end.
//
//   qsub run   --config exp.json --out results [--seed N] [--quiet]
//   qsub sweep --config exp.json --param stepsize.v --values 0.1,0.2,0.4 ...
//
// `run` executes one experiment. `sweep` re-runs the same experiment once per
// value of a single (dot-separated) config key, suffixing the experiment name
// with the key's last component and the value so every run keeps its own
// trace/report pair. The default output directory comes from QSUB_OUT_DIR,
// falling back to the current directory.

#include <cstdlib>
#include <iostream>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qsub/config.hpp"
#include "qsub/experiment.hpp"

namespace qsub {

namespace detail {

inline std::string default_out_dir() {
  const char* env = std::getenv("QSUB_OUT_DIR");
  return env && *env ? env : ".";
}

inline std::optional<std::string> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void print_config_errors(const std::string& path,
                                const std::vector<FieldError>& errors) {
  for (const auto& err : errors) {
    std::cerr << path << ": config error";
    if (!err.path.empty()) std::cerr << " at " << err.path;
    std::cerr << ": " << err.message << "\n";
  }
}

inline std::vector<std::string> split_values(const std::string& csv) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream ss(csv);
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

// "stepsize.v" -> "/stepsize/v" (JSON pointer).
inline std::string key_to_pointer(const std::string& key) {
  std::string ptr = "/";
  for (char ch : key) ptr += ch == '.' ? '/' : ch;
  return ptr;
}

inline std::string last_component(const std::string& key) {
  auto pos = key.rfind('.');
  return pos == std::string::npos ? key : key.substr(pos + 1);
}

inline std::string sanitize_for_filename(std::string s) {
  for (char& ch : s) {
    if (ch == '/' || ch == '\\' || ch == ' ') ch = '_';
  }
  return s;
}

}  // namespace detail

inline int run_command(const std::string& config_path, const RunOptions& opts) {
  auto text = detail::read_file(config_path);
  if (!text) {
    std::cerr << "cannot read config file: " << config_path << "\n";
    return 1;
  }
  ParseResult parsed = parse_config(*text);
  if (!parsed.ok()) {
    detail::print_config_errors(config_path, parsed.errors);
    return 1;
  }
  return run_experiment(*parsed.config, opts);
}

inline int sweep_command(const std::string& config_path, const std::string& key,
                         const std::string& values_csv, const RunOptions& opts) {
  auto text = detail::read_file(config_path);
  if (!text) {
    std::cerr << "cannot read config file: " << config_path << "\n";
    return 1;
  }
  nlohmann::json doc = nlohmann::json::parse(*text, nullptr, false);
  if (doc.is_discarded()) {
    std::cerr << config_path << ": config error: not a well-formed JSON document\n";
    return 1;
  }
  std::vector<std::string> values = detail::split_values(values_csv);
  if (values.empty()) {
    std::cerr << "--values must list at least one value\n";
    return 1;
  }
  nlohmann::json::json_pointer ptr(detail::key_to_pointer(key));
  std::string suffix_key = detail::last_component(key);

  int worst = 0;  // severity order: 1 (config/runtime) > 2 (check) > 0
  auto absorb = [&worst](int code) {
    if (code == 1 || worst == 1) {
      worst = 1;
    } else if (code == 2 || worst == 2) {
      worst = 2;
    }
  };

  for (const auto& value : values) {
    double numeric = 0.0;
    try {
      std::size_t used = 0;
      numeric = std::stod(value, &used);
      if (used != value.size()) throw std::invalid_argument(value);
    } catch (const std::exception&) {
      std::cerr << "--values entry is not a number: " << value << "\n";
      absorb(1);
      continue;
    }
    nlohmann::json variant = doc;
    variant[ptr] = numeric;
    if (variant.contains("name") && variant["name"].is_string()) {
      variant["name"] = variant["name"].get<std::string>() + "_" + suffix_key +
                        "_" + detail::sanitize_for_filename(value);
    }
    ParseResult parsed = parse_config(variant.dump());
    if (!parsed.ok()) {
      detail::print_config_errors(config_path + " [" + key + "=" + value + "]",
                                  parsed.errors);
      absorb(1);
      continue;
    }
    absorb(run_experiment(*parsed.config, opts));
  }
  return worst;
}

inline int cli_main(int argc, const char* const* argv) {
  CLI::App app{"subgradient-method experiment runner"};
  app.require_subcommand(1);

  std::string config_path, out_dir = detail::default_out_dir();
  std::string param_key, values_csv;
  std::uint64_t seed = 0;
  bool quiet = false;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "experiment config (JSON)")
        ->required();
    cmd->add_option("--out", out_dir, "output directory (must exist)");
    cmd->add_option("--seed", seed, "override run.seed");
    cmd->add_flag("--quiet", quiet, "suppress per-check summary lines");
  };

  CLI::App* run_cmd = app.add_subcommand("run", "execute one experiment");
  add_common(run_cmd);
  CLI::App* sweep_cmd =
      app.add_subcommand("sweep", "re-run the experiment for each value of one key");
  add_common(sweep_cmd);
  sweep_cmd->add_option("--param", param_key, "dot-separated config key")
      ->required();
  sweep_cmd->add_option("--values", values_csv, "comma-separated numeric values")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  RunOptions opts;
  opts.out_dir = out_dir;
  opts.quiet = quiet;
  if (run_cmd->count("--seed") || sweep_cmd->count("--seed")) opts.seed = seed;

  if (app.got_subcommand(run_cmd)) return run_command(config_path, opts);
  return sweep_command(config_path, param_key, values_csv, opts);
}

}  // namespace qsub
