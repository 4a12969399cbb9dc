#pragma once

#include <string>
#include <vector>

#include "semifit/field.hpp"
#include "semifit/fvm.hpp"
#include "semifit/problem.hpp"
#include "semifit/solver.hpp"

namespace semifit {

/// Truncated physical-domain solver settings. The point sources use the same
/// regularized forcing as the transformed problem, evaluated at xi(z).
struct TruncatedConfig {
  double z_max = 2000.0;
  int Nz = 4000;
  double dt = 0.001;
  double a = 0.005;
  bool include_jacobian_factor = false;
  SourceConfig source;
  SolverConfig solver;
};

/// A solution sampled on increasing heights z (all finite).
struct ProfileSolution {
  std::vector<double> z;
  Field c;  // S x z.size()
  std::vector<std::string> warnings;
  long newton_iterations = 0;

  double interpolate(int s, double height) const;
};

/// Central differences + implicit Euler on [0, z_max] with c(z_max) = 0 and
/// the ground Robin condition through a ghost node.
ProfileSolution solve_truncated(const PhysicalProblem& p, const TruncatedConfig& cfg);

/// Fitted solution restricted to its finite nodes, expressed in z.
ProfileSolution fitted_profile(const Field& c, const TransformedProblem& tp, const SpatialGrid& grid);

struct SpeciesError {
  double rel_l2 = 0.0;
  double rel_max = 0.0;
  double abs_max = 0.0;
};

struct ComparisonReport {
  double z_lo = 0.0;
  double z_hi = 0.0;
  int points = 0;
  std::vector<SpeciesError> species;
};

/// Errors of `fitted` against `reference` at the fitted nodes whose heights lie
/// in [z_lo, z_hi] (and inside the reference's range).
ComparisonReport compare(const Field& fitted, const TransformedProblem& tp, const SpatialGrid& grid,
                         const ProfileSolution& reference, double z_lo, double z_hi);

}  // namespace semifit
