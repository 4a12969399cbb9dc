#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "semifit/block_tridiagonal.hpp"
#include "semifit/field.hpp"
#include "semifit/fvm.hpp"
#include "semifit/grid.hpp"

namespace semifit {

struct SolverConfig {
  double newton_tol = 1e-10;  // infinity norm of the step residual
  int newton_max_iter = 25;
  bool nonneg_monitor = true;
  int snapshot_every = 1;

  void validate() const;
};

struct StepMonitor {
  double t = 0.0;
  int newton_iterations = 0;
  double residual_norm = 0.0;
  double min_value = 0.0;
  /// Per species: |weighted change - boundary flux - weighted (B + f)| over the
  /// sum of the magnitudes of those terms.
  std::vector<double> mass_balance;
};

struct Snapshot {
  double t = 0.0;
  Field c;
};

struct Solution {
  std::vector<Snapshot> snapshots;
  std::vector<StepMonitor> monitors;

  const Field& final_field() const { return snapshots.back().c; }
  double min_value() const;
};

class NewtonError : public std::runtime_error {
 public:
  NewtonError(const std::string& what, double residual_norm, int worst_species, int worst_node)
      : std::runtime_error(what), residual_norm_(residual_norm), worst_species_(worst_species), worst_node_(worst_node) {}
  double residual_norm() const { return residual_norm_; }
  int worst_species() const { return worst_species_; }
  int worst_node() const { return worst_node_; }

 private:
  double residual_norm_;
  int worst_species_;
  int worst_node_;
};

/// Implicit-step residual for nodes 0..N-1, node-major (length S*N).
std::vector<double> residual(const Discretization& disc, const Field& c_new, const Field& c_old, double dt,
                             double t_new);

/// Analytic Jacobian of residual() with respect to the N unknown nodes.
BlockTridiagonal step_jacobian(const Discretization& disc, const Field& c_new, double dt, double t_new);

struct NewtonOutcome {
  Field c;
  int iterations = 0;
  double residual_norm = 0.0;
};

/// Undamped Newton on a block-tridiagonal system whose last field node is
/// pinned. `res` fills the residual, `jac` the Jacobian, both at the iterate.
NewtonOutcome newton_iterate(Field start, const std::function<void(const Field&, std::vector<double>&)>& res,
                             const std::function<void(const Field&, BlockTridiagonal&)>& jac,
                             const SolverConfig& cfg);

/// One fully implicit step from c_old, starting Newton at c_old.
NewtonOutcome newton_solve(const Discretization& disc, const Field& c_old, double dt, double t_new,
                           const SolverConfig& cfg);

/// Per-species relative mass-balance defect of an accepted step.
std::vector<double> mass_balance_defect(const Discretization& disc, const Field& c_new, const Field& c_old, double dt,
                                        double t_new);

/// Initial field mapped through the transform, top node forced to zero.
Field initial_field(const Discretization& disc);

/// Thrown when Newton fails inside march(); carries the failing time level.
class MarchError : public std::runtime_error {
 public:
  MarchError(const std::string& what, int step, double t) : std::runtime_error(what), step_(step), t_(t) {}
  int step() const { return step_; }
  double t() const { return t_; }

 private:
  int step_;
  double t_;
};

Solution march(const Discretization& disc, const TimeGrid& time, const SolverConfig& cfg);

struct ConditionWitness {
  char condition = 'b';
  int species = 0;
  double xi = 0.0;
  double t = 0.0;
  std::vector<double> c;
  double value = 0.0;
};

struct ConditionReport {
  long checked_a = 0;
  long checked_b = 0;
  long checked_c = 0;
  long violations_a = 0;
  long violations_b = 0;
  long violations_c = 0;
  /// The first few witnesses per condition.
  std::vector<ConditionWitness> witnesses;
};

/// Samples the sign conditions that guarantee positivity:
///  a) f_s >= 0 on [0, T];
///  b) B_s(xi, C) >= 0 whenever C_s = 0 and C >= 0;
///  c) B_s(xi, C) <= 0 whenever C_s = M_s and C >= 0.
/// C ranges over a lattice in [0, M_1] x ... x [0, M_S], xi over the grid nodes.
ConditionReport check_sign_conditions(const TransformedProblem& tp, const SpatialGrid& grid,
                                          const std::vector<double>& box, int samples_per_axis);

}  // namespace semifit
