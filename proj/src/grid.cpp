#include "semifit/grid.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace semifit {

SpatialGrid::SpatialGrid(std::vector<double> nodes) : nodes_(std::move(nodes)) {
  if (nodes_.size() < 4) throw std::invalid_argument("spatial grid needs at least 3 intervals");
  if (nodes_.front() != 0.0 || nodes_.back() != 1.0) {
    throw std::invalid_argument("spatial grid must start at 0 and end at 1");
  }
  for (std::size_t i = 1; i < nodes_.size(); ++i) {
    if (!(nodes_[i] > nodes_[i - 1])) {
      throw std::invalid_argument("spatial grid nodes must increase strictly (node " + std::to_string(i + 1) + ")");
    }
  }
}

double SpatialGrid::cell_weight(int i) const {
  const int N = intervals();
  if (i == 0) return 0.5 * width(0);
  if (i >= N) return 0.0;
  return midpoint(i) - midpoint(i - 1);
}

SpatialGrid build_uniform_grid(int intervals) {
  if (intervals < 3) {
    throw std::invalid_argument("uniform grid needs N >= 3 intervals, got " + std::to_string(intervals));
  }
  std::vector<double> nodes(static_cast<std::size_t>(intervals) + 1);
  for (int i = 0; i <= intervals; ++i) nodes[static_cast<std::size_t>(i)] = static_cast<double>(i) / intervals;
  return SpatialGrid(std::move(nodes));
}

TimeGrid build_time_grid(double T, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("time step must be positive");
  if (!(T > 0.0)) throw std::invalid_argument("final time must be positive");
  if (dt > T * (1.0 + 1e-12)) throw std::invalid_argument("time step exceeds final time");

  const double tol = 1e-9 * T;
  const auto full = static_cast<long>(std::floor(T / dt + 1e-9));
  TimeGrid g;
  g.levels.reserve(static_cast<std::size_t>(full) + 2);
  for (long j = 0; j < full; ++j) g.levels.push_back(static_cast<double>(j) * dt);
  const double last_full = static_cast<double>(full) * dt;
  if (T - last_full > tol) g.levels.push_back(last_full);
  g.levels.push_back(T);
  return g;
}

}  // namespace semifit
