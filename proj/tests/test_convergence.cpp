#include <cmath>
#include <random>

#include "doctest.h"
#include "semifit/convergence.hpp"

using namespace semifit;

namespace {

struct Triple {
  Field c, m, f;
};

// Second-order sequence u + C h^2 sampled on nested uniform grids.
Triple second_order(int N) {
  Triple t{Field(2, N + 1), Field(2, 2 * N + 1), Field(2, 4 * N + 1)};
  auto u = [](double x) { return std::sin(3.0 * x) + 2.0; };
  auto fill = [&](Field& f, int n) {
    const double h = 1.0 / n;
    for (int i = 0; i <= n; ++i) {
      const double x = static_cast<double>(i) / n;
      f(0, i) = u(x) + h * h * (1.0 + x);
      f(1, i) = u(x) + h * (2.0 - x);
    }
  };
  fill(t.c, N);
  fill(t.m, 2 * N);
  fill(t.f, 4 * N);
  return t;
}

}  // namespace

TEST_CASE("constructed sequences recover their order") {
  const Triple t = second_order(10);
  const RateTable r = runge_rates(t.c, t.m, t.f, build_uniform_grid(10));
  REQUIRE(r.xi.size() == 11);
  for (std::size_t k = 0; k < r.xi.size(); ++k) {
    REQUIRE(r.rates[0][k].has_value());
    CHECK(*r.rates[0][k] == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(*r.rates[1][k] == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("identical solutions give undefined rates") {
  Field a(1, 11, 3.0), b(1, 21, 3.0), c(1, 41, 3.0);
  const RateTable r = runge_rates(a, b, c, build_uniform_grid(10));
  for (const auto& v : r.rates[0]) CHECK_FALSE(v.has_value());
}

TEST_CASE("rates are invariant under scaling and shifting") {
  const Triple t = second_order(8);
  const RateTable base = runge_rates(t.c, t.m, t.f, build_uniform_grid(8));
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> scale(0.5, 50.0), shift(-3.0, 3.0);
  for (int trial = 0; trial < 5; ++trial) {
    const double k = scale(rng), b = shift(rng);
    Triple s = t;
    for (Field* f : {&s.c, &s.m, &s.f}) {
      for (double& v : f->data()) v = k * v;
    }
    Triple sh = t;
    const int nodes[3] = {9, 17, 33};
    Field* fs[3] = {&sh.c, &sh.m, &sh.f};
    for (int g = 0; g < 3; ++g) {
      for (int i = 0; i < nodes[g]; ++i) {
        const double x = static_cast<double>(i) / (nodes[g] - 1);
        for (int sp = 0; sp < 2; ++sp) (*fs[g])(sp, i) += b * std::cos(x);
      }
    }
    const RateTable rs = runge_rates(s.c, s.m, s.f, build_uniform_grid(8));
    const RateTable rsh = runge_rates(sh.c, sh.m, sh.f, build_uniform_grid(8));
    for (int sp = 0; sp < 2; ++sp) {
      for (std::size_t q = 0; q < base.xi.size(); ++q) {
        CHECK(*rs.rates[static_cast<std::size_t>(sp)][q] == doctest::Approx(*base.rates[static_cast<std::size_t>(sp)][q]).epsilon(1e-9));
        CHECK(*rsh.rates[static_cast<std::size_t>(sp)][q] == doctest::Approx(*base.rates[static_cast<std::size_t>(sp)][q]).epsilon(1e-6));
      }
    }
  }
}

TEST_CASE("evaluation points are common nodes") {
  const Triple t = second_order(10);
  const RateTable r = runge_rates(t.c, t.m, t.f, build_uniform_grid(10), build_uniform_grid(20), build_uniform_grid(40));
  const SpatialGrid fine = build_uniform_grid(40);
  for (std::size_t k = 0; k < r.xi.size(); ++k) CHECK(r.xi[k] == fine.node(static_cast<int>(4 * k)));
}

TEST_CASE("non-nested grids are rejected") {
  Field a(1, 11), b(1, 16), c(1, 41);
  CHECK_THROWS(runge_rates(a, b, c, build_uniform_grid(10), build_uniform_grid(15), build_uniform_grid(40)));
  Field d(2, 21);
  CHECK_THROWS(runge_rates(a, d, c, build_uniform_grid(10)));
}
