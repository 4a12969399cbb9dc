#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "semifit/transform.hpp"

using namespace semifit;

TEST_CASE("height transform round trip") {
  const double a = 0.005;
  CHECK(z_to_xi(a, 0.0) == 0.0);
  for (double z : {1e-6, 0.3, 20.0, 85.0, 300.0, 2000.0}) {
    CHECK(xi_to_z(a, z_to_xi(a, z)) == doctest::Approx(z).epsilon(1e-9));
  }
  CHECK(z_to_xi(a, 1e6) == 1.0);
  CHECK(std::isfinite(z_to_xi(a, 1e300)));
  CHECK_THROWS(z_to_xi(a, -1.0));
  CHECK_THROWS(xi_to_z(a, 1.0));
  CHECK_THROWS(xi_to_z(a, -0.1));
}

TEST_CASE("transform is monotone") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 3000.0);
  for (int k = 0; k < 500; ++k) {
    double z1 = u(rng), z2 = u(rng);
    if (z1 > z2) std::swap(z1, z2);
    CHECK(z_to_xi(0.005, z1) <= z_to_xi(0.005, z2));
  }
}

namespace {

PhysicalProblem tabulated_problem() {
  PhysicalProblem p;
  p.w = 0.7;
  SpeciesSpec sp;
  sp.K = Profile::tabulated({0.0, 50.0, 200.0}, {1.0, 4.0, 2.5});
  p.species = {sp};
  p.reactions = ReactionNetwork::zero(1);
  return p;
}

}  // namespace

TEST_CASE("coefficient identities") {
  const TransformedProblem tp(three_species_column(), 0.005, false);
  for (double xi : {0.0, 0.2, 0.5, 0.9}) {
    const auto c = eval_coefficients(tp, 1, xi);
    const double one_m = 1.0 - xi * xi;
    CHECK(c.l == doctest::Approx(0.005 * 0.005 * 5.0));
    CHECK(c.p == doctest::Approx(c.l * one_m * one_m));
    CHECK(c.q == doctest::Approx(one_m * c.m).epsilon(1e-12));
    CHECK(c.lbar == doctest::Approx(c.l * (1.0 + xi)));
  }
}

TEST_CASE("d is the xi-derivative of q") {
  const PhysicalProblem base = tabulated_problem();
  const TransformedProblem tp(base, 0.01, false);
  const double h = 1e-6;
  // Points well inside the table segments.
  for (double z : {10.0, 30.0, 100.0, 150.0, 400.0}) {
    const double xi = z_to_xi(0.01, z);
    const double dq = (eval_coefficients(tp, 0, xi + h).q - eval_coefficients(tp, 0, xi - h).q) / (2.0 * h);
    CHECK(eval_coefficients(tp, 0, xi).d == doctest::Approx(dq).epsilon(1e-6));
  }
}

TEST_CASE("reaction terms of the three-species network") {
  const PhysicalProblem p = three_species_column();
  const std::vector<double> c{1.5, 0.25, 2.0};
  const auto r = reaction_r(p.reactions, c);
  CHECK(r[0] == doctest::Approx(2000.0 * 0.25 - 1000.0 * 1.5 * 2.0));
  CHECK(r[1] == doctest::Approx(-2000.0 * 0.25 + 1000.0 * 1.5 * 2.0));
  CHECK(r[2] == doctest::Approx(2000.0 * 0.25 - 1000.0 * 1.5 * 2.0));
  CHECK_THROWS(reaction_r(p.reactions, std::vector<double>{1.0}));
}

TEST_CASE("reaction Jacobian matches central differences") {
  const PhysicalProblem p = three_species_column();
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 5.0);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<double> c{u(rng), u(rng), u(rng)};
    const auto jac = reaction_jacobian(p.reactions, c);
    for (int j = 0; j < 3; ++j) {
      auto cp = c, cm = c;
      cp[static_cast<std::size_t>(j)] += 1e-4;
      cm[static_cast<std::size_t>(j)] -= 1e-4;
      const auto rp = reaction_r(p.reactions, cp), rm = reaction_r(p.reactions, cm);
      for (int s = 0; s < 3; ++s) {
        const double fd = (rp[static_cast<std::size_t>(s)] - rm[static_cast<std::size_t>(s)]) / 2e-4;
        CHECK(jac[static_cast<std::size_t>(s * 3 + j)] == doctest::Approx(fd).epsilon(1e-8));
      }
    }
  }
}
