#include "semifit/fvm.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "semifit/transform.hpp"

namespace semifit {

double bernoulli(double x) {
  // Below this the series 1 - x/2 + x^2/12 is exact to rounding.
  if (std::abs(x) < 1e-8) return 1.0 - 0.5 * x;
  return x / std::expm1(x);
}

namespace {

// atanh(hi) - atanh(lo) without cancellation for narrow intervals.
double atanh_difference(double xi_lo, double xi_hi) {
  if (!(xi_lo >= 0.0 && xi_lo < xi_hi)) throw std::invalid_argument("flux weights: need 0 <= xi_lo < xi_hi");
  if (!(xi_hi < 1.0)) throw std::invalid_argument("flux weights: degenerate interval reaches xi = 1");
  return std::atanh((xi_hi - xi_lo) / (1.0 - xi_hi * xi_lo));
}

}  // namespace

FaceFlux fitted_face_flux(double l, double m, double xi_lo, double xi_hi) {
  if (!(l > 0.0)) throw std::invalid_argument("fitted_face_flux: l must be positive");
  const double dtheta = atanh_difference(xi_lo, xi_hi);
  // The integrating factor ((1+xi)/(1-xi))^{alpha/2} ratio across the
  // interval is e^g; factoring it out leaves Bernoulli weights.
  const double g = (m / l) * dtheta;
  const double scale = l / dtheta;
  return {scale * bernoulli(g), scale * bernoulli(-g)};
}

FaceFlux stable_flux_weights(double alpha, double xi_lo, double xi_hi) {
  if (alpha == 0.0) throw std::invalid_argument("stable_flux_weights: alpha = 0 has no m-normalized form");
  const double g = alpha * atanh_difference(xi_lo, xi_hi);
  return {bernoulli(g) / g, bernoulli(-g) / g};
}

FaceFlux degenerate_face_flux_weights(double lbar, double m) {
  if (!(lbar > 0.0)) throw std::invalid_argument("degenerate_face_flux_weights: lbar must be positive");
  return {0.5 * (lbar - m), 0.5 * (lbar + m)};
}

double robin_boundary_flux_coefficient(const TransformedProblem& tp, int s) {
  const auto& sp = tp.base().species.at(static_cast<std::size_t>(s));
  return tp.a() * (sp.delta * tp.k(s, 0.0) - tp.w());
}

double CoefficientTable::boundary_flux(int s, const Field& c) const {
  const int N = intervals_;
  return face(s, N - 1)(c(s, N - 1), c(s, N)) - robin(s) * c(s, 0);
}

CoefficientTable assemble_coefficients(const TransformedProblem& tp, const SpatialGrid& grid) {
  const int S = tp.species_count();
  const int N = grid.intervals();
  if (N < 3) throw std::invalid_argument("assemble_coefficients: grid too coarse");

  CoefficientTable t;
  t.species_ = S;
  t.intervals_ = N;
  const auto size = static_cast<std::size_t>(S) * static_cast<std::size_t>(N + 1);
  t.lower_.assign(size, 0.0);
  t.diag_.assign(size, 0.0);
  t.upper_.assign(size, 0.0);
  t.d_.assign(size, 0.0);
  t.face_.assign(size, FaceFlux{});
  t.robin_.assign(static_cast<std::size_t>(S), 0.0);
  t.weight_.resize(static_cast<std::size_t>(N) + 1);
  for (int i = 0; i <= N; ++i) t.weight_[static_cast<std::size_t>(i)] = grid.cell_weight(i);

  for (int s = 0; s < S; ++s) {
    for (int k = 0; k < N; ++k) {
      const double mid = grid.midpoint(k);
      const double jac = 1.0 - mid * mid;
      const auto c = eval_coefficients(tp, s, mid);
      const FaceFlux f = (k < N - 1) ? fitted_face_flux(c.l, c.m, grid.node(k), grid.node(k + 1))
                                     : degenerate_face_flux_weights(c.lbar, c.m);
      t.face_[t.at(s, k)] = {jac * f.lo, jac * f.hi};
    }
    for (int i = 0; i <= N; ++i) t.d_[t.at(s, i)] = eval_coefficients(tp, s, grid.node(i)).d;

    t.robin_[static_cast<std::size_t>(s)] = robin_boundary_flux_coefficient(tp, s);
    for (int i = 0; i < N; ++i) {
      const auto& right = t.face_[t.at(s, i)];
      t.upper_[t.at(s, i)] = right.hi;
      if (i == 0) {
        t.diag_[t.at(s, i)] = right.lo + t.robin_[static_cast<std::size_t>(s)];
      } else {
        const auto& left = t.face_[t.at(s, i - 1)];
        t.lower_[t.at(s, i)] = left.lo;
        t.diag_[t.at(s, i)] = right.lo + left.hi;
      }
    }
  }
  return t;
}

SourceTerm::SourceTerm(const TransformedProblem& tp, const SourceConfig& cfg, const SpatialGrid& grid)
    : nodes_(grid.node_count()), h_(cfg.h) {
  check_source_support(tp, cfg);
  const int S = tp.species_count();
  scaled_hat_.assign(static_cast<std::size_t>(S) * static_cast<std::size_t>(nodes_), 0.0);
  for (int s = 0; s < S; ++s) {
    intensity_.push_back(tp.base().species[static_cast<std::size_t>(s)].Q);
    if (intensity_.back().is_zero()) continue;
    const double scale = source_scale(tp, s);
    for (int i = 0; i < nodes_; ++i) {
      scaled_hat_[static_cast<std::size_t>(s * nodes_ + i)] = scale * delta_hat(grid.node(i), tp.xi_star(s), cfg.h);
    }
  }
}

double SourceTerm::operator()(int s, int i, double t) const {
  const double hat = scaled_hat_[static_cast<std::size_t>(s * nodes_ + i)];
  return hat == 0.0 ? 0.0 : intensity_[static_cast<std::size_t>(s)](t) * hat;
}

Discretization::Discretization(const TransformedProblem& problem, SpatialGrid g, const SourceConfig& source_cfg)
    : tp(problem), grid(std::move(g)), table(assemble_coefficients(tp, grid)), source(tp, source_cfg, grid) {}

double apply_stencil(const CoefficientTable& table, int s, int i, const Field& c) {
  double acc = -table.diag(s, i) * c(s, i) + table.upper(s, i) * c(s, i + 1);
  if (i > 0) acc += table.lower(s, i) * c(s, i - 1);
  return acc;
}

Field apply_spatial_operator(const Discretization& disc, double t, const Field& c) {
  const int S = disc.species();
  const int N = disc.intervals();
  if (c.species() != S || c.nodes() != N + 1) {
    throw std::invalid_argument("apply_spatial_operator: field shape mismatch");
  }
  const auto& net = disc.tp.base().reactions;
  Field out(S, N + 1);
  for (int i = 0; i < N; ++i) {
    const auto r = reaction_r(net, c.at_node(i));
    const double w = disc.table.weight(i);
    for (int s = 0; s < S; ++s) {
      const double b = r[static_cast<std::size_t>(s)] - disc.table.d(s, i) * c(s, i);
      out(s, i) = apply_stencil(disc.table, s, i, c) / w + b + disc.source(s, i, t);
    }
  }
  return out;
}

}  // namespace semifit
