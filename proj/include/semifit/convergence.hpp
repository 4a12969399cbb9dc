#pragma once

#include <optional>
#include <vector>

#include "semifit/field.hpp"
#include "semifit/grid.hpp"

namespace semifit {

/// Pointwise convergence rates on the coarse-grid nodes.
struct RateTable {
  std::vector<double> xi;
  /// rates[s][k] for species s at xi[k]; empty optional when undefined.
  std::vector<std::vector<std::optional<double>>> rates;
};

/// Runge three-grid rate log2(|C_N - C_2N| / |C_2N - C_4N|) at every coarse node.
/// Differences below 1e-14 * max|C| mark the rate undefined.
RateTable runge_rates(const Field& coarse, const Field& medium, const Field& fine, const SpatialGrid& coarse_grid,
                      const SpatialGrid& medium_grid, const SpatialGrid& fine_grid);

/// Same, assuming uniform grids of N, 2N and 4N intervals.
RateTable runge_rates(const Field& coarse, const Field& medium, const Field& fine, const SpatialGrid& coarse_grid);

}  // namespace semifit
