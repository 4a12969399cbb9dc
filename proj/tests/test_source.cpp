#include <cmath>

#include "doctest.h"
#include "semifit/source.hpp"
#include "semifit/transform.hpp"

using namespace semifit;

TEST_CASE("hat has unit mass and compact support") {
  const double xs = 0.3, h = 0.01;
  // Trapezoid rule on a fine lattice that contains the kinks.
  const int n = 40000;
  const double lo = 0.2, hi = 0.4, dx = (hi - lo) / n;
  double mass = 0.0;
  for (int k = 0; k <= n; ++k) {
    const double v = delta_hat(lo + k * dx, xs, h);
    mass += (k == 0 || k == n) ? 0.5 * v : v;
  }
  CHECK(mass * dx == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(delta_hat(xs, xs, h) == doctest::Approx(1.0 / (2.0 * h)));
  CHECK(delta_hat(xs + 2.0 * h, xs, h) == 0.0);
  CHECK(delta_hat(xs - 0.05, xs, h) == 0.0);
  CHECK_THROWS(delta_hat(0.3, 0.3, 0.0));
}

TEST_CASE("source support must stay inside the domain") {
  PhysicalProblem p = three_species_column();
  p.species[0].z_star = 1.0;  // xi* ~ 0.005, support leaves (0, 1)
  const TransformedProblem tp(p, 0.005, false);
  CHECK_THROWS(check_source_support(tp, SourceConfig{0.01}));
  // A species without source does not care.
  p.species[0].Q = Polynomial{{0.0}};
  CHECK_NOTHROW(check_source_support(TransformedProblem(p, 0.005, false), SourceConfig{0.01}));
}

TEST_CASE("nodal source values") {
  const TransformedProblem tp(three_species_column(), 0.005, false);
  const SpatialGrid g = build_uniform_grid(100);
  const auto f = source_values(tp, SourceConfig{0.01}, 0, 0.5, g);
  const double xs = tp.xi_star(0);
  for (int i = 0; i < g.node_count(); ++i) {
    const double want = 0.5 * delta_hat(g.node(i), xs, 0.01);
    CHECK(f[static_cast<std::size_t>(i)] == doctest::Approx(want));
    if (std::abs(g.node(i) - xs) >= 0.02) CHECK(f[static_cast<std::size_t>(i)] == 0.0);
  }
  const auto f3 = source_values(tp, SourceConfig{0.01}, 2, 0.5, g);
  for (double v : f3) CHECK(v == 0.0);
}

TEST_CASE("jacobian factor scales the source") {
  const TransformedProblem off(three_species_column(), 0.005, false);
  const TransformedProblem on(three_species_column(), 0.005, true);
  CHECK(source_scale(off, 1) == 1.0);
  const double xs = on.xi_star(1);
  CHECK(source_scale(on, 1) == doctest::Approx(0.005 * (1.0 - xs * xs)));
}
