#pragma once

#include <vector>

#include "semifit/field.hpp"
#include "semifit/grid.hpp"
#include "semifit/problem.hpp"
#include "semifit/source.hpp"

namespace semifit {

/// Two-point face flux rho = hi * C_hi - lo * C_lo.
struct FaceFlux {
  double lo = 0.0;
  double hi = 0.0;

  double operator()(double c_lo, double c_hi) const { return hi * c_hi - lo * c_lo; }
};

/// Bernoulli function x / (e^x - 1), finite for every finite x.
double bernoulli(double x);

/// Exponentially fitted flux of the frozen-coefficient two-point problem
///   (l (1 - xi^2) V' + m V)' = 0,  V(xi_lo) = C_lo,  V(xi_hi) = C_hi
/// on an interval inside [0, 1). Written through the Bernoulli function so
/// neither large |m/l| nor m = 0 needs special handling by the caller.
FaceFlux fitted_face_flux(double l, double m, double xi_lo, double xi_hi);

/// The same flux normalized by m: rho = m (w.hi C_hi - w.lo C_lo). Needs alpha != 0.
FaceFlux stable_flux_weights(double alpha, double xi_lo, double xi_hi);

/// Flux across the last interval [xi_N, 1]: rho = hi * C_{N+1} - lo * C_N.
FaceFlux degenerate_face_flux_weights(double lbar, double m);

/// a (delta_s k_s(0) - w): the ground flux per unit C_{s,1}.
double robin_boundary_flux_coefficient(const TransformedProblem& tp, int s);

/// Assembled spatial discretization. Rows are the N unknown nodes 0..N-1 (the
/// top node N is pinned to zero). Entries use the sign convention
///   weight_i dC_i/dt = lower_i C_{i-1} - diag_i C_i + upper_i C_{i+1} + weight_i (B + f).
class CoefficientTable {
 public:
  int species() const { return species_; }
  int intervals() const { return intervals_; }

  double lower(int s, int i) const { return lower_[at(s, i)]; }
  double diag(int s, int i) const { return diag_[at(s, i)]; }
  double upper(int s, int i) const { return upper_[at(s, i)]; }
  double weight(int i) const { return weight_[static_cast<std::size_t>(i)]; }
  /// d_s at node i, cached for the zeroth-order term of B.
  double d(int s, int i) const { return d_[at(s, i)]; }

  /// Face k sits between nodes k and k+1 and already carries (1 - xi_{k+1/2}^2).
  const FaceFlux& face(int s, int k) const { return face_[at(s, k)]; }
  double robin(int s) const { return robin_[static_cast<std::size_t>(s)]; }

  /// Net flux leaving through both ends for field C, per species:
  /// top-face flux minus ground flux, i.e. the telescoped stencil sum.
  double boundary_flux(int s, const Field& c) const;

  friend CoefficientTable assemble_coefficients(const TransformedProblem& tp, const SpatialGrid& grid);

 private:
  std::size_t at(int s, int i) const {
    return static_cast<std::size_t>(s) * static_cast<std::size_t>(intervals_ + 1) + static_cast<std::size_t>(i);
  }

  int species_ = 0;
  int intervals_ = 0;
  std::vector<double> lower_, diag_, upper_, d_, weight_, robin_;
  std::vector<FaceFlux> face_;
};

CoefficientTable assemble_coefficients(const TransformedProblem& tp, const SpatialGrid& grid);

/// Time-independent hat profiles on the grid; f_{s,i}(t) = Q_s(t) * scale_s * hat_{s,i}.
class SourceTerm {
 public:
  SourceTerm(const TransformedProblem& tp, const SourceConfig& cfg, const SpatialGrid& grid);

  double operator()(int s, int i, double t) const;
  double h() const { return h_; }

 private:
  int nodes_;
  double h_;
  std::vector<Polynomial> intensity_;
  std::vector<double> scaled_hat_;
};

/// Everything one implicit step needs, assembled once per (problem, grid).
struct Discretization {
  Discretization(const TransformedProblem& problem, SpatialGrid g, const SourceConfig& source_cfg);

  TransformedProblem tp;
  SpatialGrid grid;
  CoefficientTable table;
  SourceTerm source;

  int species() const { return tp.species_count(); }
  int intervals() const { return grid.intervals(); }
};

/// Stencil part lower C_{i-1} - diag C_i + upper C_{i+1} at row i.
double apply_stencil(const CoefficientTable& table, int s, int i, const Field& c);

/// Semi-discrete right-hand side dC/dt; the pinned row is zero.
Field apply_spatial_operator(const Discretization& disc, double t, const Field& c);

}  // namespace semifit
