#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "magswim/core_model.hpp"

namespace magswim {

/// Parse or validation failure in a run configuration. `line` is 0 when the
/// problem is not tied to one line (e.g. a missing or inconsistent section).
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& what, int line, std::string key)
      : std::runtime_error(what), line_(line), key_(std::move(key)) {}
  int line() const noexcept { return line_; }
  const std::string& key() const noexcept { return key_; }

 private:
  int line_;
  std::string key_;
};

struct SolverSettings {
  double dt = 0.0;
  double t_final = 0.0;
  int burn_in_periods = 20;
  int measure_periods = 1;
};

struct AnalysisSettings {
  double omega_min = 1e-2;
  double omega_max = 1e3;
  int n_grid = 64;
  int bracket_depth = 3;
};

struct OutputSettings {
  std::string directory = ".";
  std::vector<std::string> formats{"csv"};
};

struct RunConfig {
  SwimmerParams params;
  FieldProgram field = FieldProgram::sinusoidal(1.0, 0.1, 1.0);
  Configuration initial;
  SolverSettings solver;
  AnalysisSettings analysis;
  OutputSettings output;
  /// One "key = value" line per default that was filled in.
  std::vector<std::string> defaults_applied;
  /// Soft parameter warnings.
  std::vector<std::string> warnings;
};

/// Parses the sectioned key-value format:
///
///   [params]            L, K, M, xi, eta (xi/eta take one value or three, link 1 first)
///   [field.constant]    hx, hy
///   [field.sinusoidal]  hx0, epsilon, omega
///   [field.tabulated]   sample = t hx hy   (repeated, t strictly increasing)
///   [initial]           x, y, theta, alpha2, alpha3
///   [solver]            dt, t_final, burn_in_periods, measure_periods
///   [analysis]          omega_min, omega_max, n_grid, bracket_depth
///   [output]            directory, formats (csv and/or jsonl)
///
/// `#` starts a comment. Unknown sections or keys, duplicate keys and more than
/// one field section are errors.
RunConfig parse_config(const std::string& text, const std::string& source = "<config>");

RunConfig load_config(const std::filesystem::path& path);

}  // namespace magswim
