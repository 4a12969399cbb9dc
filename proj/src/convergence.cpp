#include "semifit/convergence.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace semifit {

namespace {

// Index of coarse node i on a grid refined by `factor`, checking coincidence.
int nested_index(const SpatialGrid& coarse, const SpatialGrid& fine, int i, int factor) {
  const int k = i * factor;
  if (k >= fine.node_count() || fine.node(k) != coarse.node(i)) {
    throw std::invalid_argument("runge_rates: grids are not nested");
  }
  return k;
}

}  // namespace

RateTable runge_rates(const Field& coarse, const Field& medium, const Field& fine, const SpatialGrid& coarse_grid,
                      const SpatialGrid& medium_grid, const SpatialGrid& fine_grid) {
  const int S = coarse.species();
  if (medium.species() != S || fine.species() != S) throw std::invalid_argument("runge_rates: species count mismatch");
  const int N = coarse_grid.intervals();
  if (medium_grid.intervals() != 2 * N || fine_grid.intervals() != 4 * N) {
    throw std::invalid_argument("runge_rates: grids are not nested (need N, 2N, 4N intervals)");
  }
  if (coarse.nodes() != N + 1 || medium.nodes() != 2 * N + 1 || fine.nodes() != 4 * N + 1) {
    throw std::invalid_argument("runge_rates: field does not match its grid");
  }

  const double floor = 1e-14 * std::max({coarse.max_abs(), medium.max_abs(), fine.max_abs()});
  RateTable table;
  table.xi = coarse_grid.nodes();
  table.rates.assign(static_cast<std::size_t>(S), std::vector<std::optional<double>>(static_cast<std::size_t>(N) + 1));
  for (int i = 0; i <= N; ++i) {
    const int im = nested_index(coarse_grid, medium_grid, i, 2);
    const int jf = nested_index(coarse_grid, fine_grid, i, 4);
    for (int s = 0; s < S; ++s) {
      const double num = std::abs(coarse(s, i) - medium(s, im));
      const double den = std::abs(medium(s, im) - fine(s, jf));
      if (num <= floor || den <= floor) continue;
      table.rates[static_cast<std::size_t>(s)][static_cast<std::size_t>(i)] = std::log2(num / den);
    }
  }
  return table;
}

RateTable runge_rates(const Field& coarse, const Field& medium, const Field& fine, const SpatialGrid& coarse_grid) {
  const int N = coarse_grid.intervals();
  return runge_rates(coarse, medium, fine, coarse_grid, build_uniform_grid(2 * N), build_uniform_grid(4 * N));
}

}  // namespace semifit
