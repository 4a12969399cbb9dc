#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>

#include "semifit/config.hpp"

namespace semifit {

enum ExitCode : int { kExitOk = 0, kExitFindings = 1, kExitConfig = 2, kExitSolver = 3, kExitIo = 4 };

inline constexpr const char* kOutDirEnv = "SEMIFIT_OUT_DIR";

/// --out wins, then $SEMIFIT_OUT_DIR, then output.directory from the config.
std::filesystem::path resolve_output_directory(const std::optional<std::string>& cli_out, const RunConfig& cfg);

/// Each command writes into `out` and reports progress on `log`. Exceptions
/// are mapped to exit codes.
int cmd_solve(const RunConfig& cfg, const std::filesystem::path& out, std::ostream& log);
int cmd_runge(const RunConfig& cfg, const std::filesystem::path& out, std::ostream& log);
int cmd_compare(const RunConfig& cfg, const std::filesystem::path& out, std::ostream& log);
int cmd_check_conditions(const RunConfig& cfg, const std::filesystem::path& out, std::ostream& log);

/// Grid sizes for a Runge study: a single N becomes N, 2N, 4N. Throws
/// ConfigError unless the result is nested.
std::vector<int> runge_grid_sizes(const RunConfig& cfg);

}  // namespace semifit
