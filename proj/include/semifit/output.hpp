#pragma once

#include <filesystem>
#include <ostream>
#include <stdexcept>
#include <string>

#include "semifit/convergence.hpp"
#include "semifit/grid.hpp"
#include "semifit/problem.hpp"
#include "semifit/solver.hpp"

namespace semifit {

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr const char* kSolutionHeader = "t,i,xi,z,species,value";

/// Failure to create or write an output file.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// 17 significant digits; "inf"/"nan" for non-finite values.
std::string format_double(double v);

/// One row per (snapshot, node, species); i and species are 1-based and z is
/// "inf" at xi = 1.
void write_solution_csv(std::ostream& os, const Solution& sol, const TransformedProblem& tp, const SpatialGrid& grid);

/// Columns xi, n1..nS; undefined rates are written as "nan".
void write_rates_csv(std::ostream& os, const RateTable& table);

/// Writes `text` to `path`, creating parent directories. Throws IoError.
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace semifit
