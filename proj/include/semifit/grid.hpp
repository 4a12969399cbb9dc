#pragma once

#include <vector>

namespace semifit {

/// Nodes 0 = xi_1 < ... < xi_{N+1} = 1, stored zero-based: node(0) .. node(N).
class SpatialGrid {
 public:
  /// Throws unless nodes start at 0, end at 1, increase strictly and N >= 3.
  explicit SpatialGrid(std::vector<double> nodes);

  int intervals() const { return static_cast<int>(nodes_.size()) - 1; }
  int node_count() const { return static_cast<int>(nodes_.size()); }
  double node(int i) const { return nodes_[static_cast<std::size_t>(i)]; }
  const std::vector<double>& nodes() const { return nodes_; }

  /// h of the interval [node(i), node(i+1)].
  double width(int i) const { return nodes_[static_cast<std::size_t>(i) + 1] - nodes_[static_cast<std::size_t>(i)]; }
  /// Midpoint of the interval [node(i), node(i+1)].
  double midpoint(int i) const {
    return 0.5 * (nodes_[static_cast<std::size_t>(i)] + nodes_[static_cast<std::size_t>(i) + 1]);
  }
  /// Control-volume weight of node i: h_1/2 at the ground node, the dual-cell
  /// width for interior nodes, 0 for the pinned top node.
  double cell_weight(int i) const;

 private:
  std::vector<double> nodes_;
};

SpatialGrid build_uniform_grid(int intervals);

struct TimeGrid {
  std::vector<double> levels;  // t_1 = 0 < ... < t_{M+1} = T

  int steps() const { return static_cast<int>(levels.size()) - 1; }
  double dt(int j) const { return levels[static_cast<std::size_t>(j) + 1] - levels[static_cast<std::size_t>(j)]; }
  double final_time() const { return levels.back(); }
};

/// Constant step dt; the last step is shortened when T/dt is not integral.
TimeGrid build_time_grid(double T, double dt);

}  // namespace semifit
