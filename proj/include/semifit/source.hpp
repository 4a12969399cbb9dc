#pragma once

#include <vector>

#include "semifit/grid.hpp"
#include "semifit/problem.hpp"

namespace semifit {

/// Regularization of the point sources. The hat has support radius 2h.
struct SourceConfig {
  double h = 0.01;
};

/// Triangular unit-mass hat (2h - |xi - xi_star|)/(4h^2) on |xi - xi_star| < 2h.
double delta_hat(double xi, double xi_star, double h);

/// Throws unless every species with a nonzero source has its hat support
/// strictly inside (0, 1).
void check_source_support(const TransformedProblem& tp, const SourceConfig& cfg);

/// f_{s,i}(t) at every node of the grid (pinned top node included).
std::vector<double> source_values(const TransformedProblem& tp, const SourceConfig& cfg, int s, double t,
                                  const SpatialGrid& grid);

/// Multiplier applied to Q_s(t) delta_hat: a(1 - xi_star^2) when the transform's
/// Jacobian factor is included, 1 otherwise.
double source_scale(const TransformedProblem& tp, int s);

}  // namespace semifit
