#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "semifit/problem.hpp"
#include "semifit/solver.hpp"
#include "semifit/source.hpp"

namespace semifit {

/// Configuration problem; `key()` is the dotted path of the offending entry.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, const std::string& message)
      : std::runtime_error(key.empty() ? message : key + ": " + message), key_(std::move(key)) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

struct ReferenceSection {
  std::string mode = "truncated";  // "truncated" or "self"
  double z_max = 2000.0;
  int Nz = 2000;
  double z_lo = 0.0;
  double z_hi = 300.0;
};

struct ConditionsSection {
  std::vector<double> box;
  int samples_per_axis = 21;
};

struct RunConfig {
  PhysicalProblem problem;
  double a = 0.005;
  bool include_jacobian_factor = false;
  std::vector<int> grid_N;  // one entry for solve/compare, three for runge
  double dt = 0.001;
  SourceConfig source;
  SolverConfig solver;
  std::string output_directory = "out";
  int format_version = 1;
  std::optional<ReferenceSection> reference;
  std::optional<ConditionsSection> conditions;
};

/// Parses JSON text. Unknown keys and missing required sections are errors.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

/// Names of the bundled presets.
std::vector<std::string> preset_names();
/// JSON text of a bundled preset; throws ConfigError for unknown names.
std::string preset_text(const std::string& name);

}  // namespace semifit
