#include "semifit/source.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace semifit {

double delta_hat(double xi, double xi_star, double h) {
  if (!(h > 0.0)) throw std::invalid_argument("delta_hat: h must be positive");
  const double dist = std::abs(xi_star - xi);
  if (dist >= 2.0 * h) return 0.0;
  return (2.0 * h - dist) / (4.0 * h * h);
}

void check_source_support(const TransformedProblem& tp, const SourceConfig& cfg) {
  if (!(cfg.h > 0.0)) throw std::invalid_argument("source regularization h must be positive");
  for (int s = 0; s < tp.species_count(); ++s) {
    if (tp.base().species[static_cast<std::size_t>(s)].Q.is_zero()) continue;
    const double xs = tp.xi_star(s);
    if (xs - 2.0 * cfg.h <= 0.0 || xs + 2.0 * cfg.h >= 1.0) {
      throw std::invalid_argument("species " + std::to_string(s + 1) + ": source support (" +
                                  std::to_string(xs - 2.0 * cfg.h) + ", " + std::to_string(xs + 2.0 * cfg.h) +
                                  ") leaves (0, 1)");
    }
  }
}

double source_scale(const TransformedProblem& tp, int s) {
  if (!tp.include_jacobian_factor()) return 1.0;
  const double xs = tp.xi_star(s);
  return tp.a() * (1.0 - xs * xs);
}

std::vector<double> source_values(const TransformedProblem& tp, const SourceConfig& cfg, int s, double t,
                                  const SpatialGrid& grid) {
  check_source_support(tp, cfg);
  std::vector<double> f(static_cast<std::size_t>(grid.node_count()), 0.0);
  const double q = tp.source_intensity(s, t) * source_scale(tp, s);
  if (q == 0.0) return f;
  const double xs = tp.xi_star(s);
  for (int i = 0; i < grid.node_count(); ++i) f[static_cast<std::size_t>(i)] = q * delta_hat(grid.node(i), xs, cfg.h);
  return f;
}

}  // namespace semifit
