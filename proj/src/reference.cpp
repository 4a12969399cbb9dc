#include "semifit/reference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "semifit/transform.hpp"

namespace semifit {

double ProfileSolution::interpolate(int s, double height) const {
  if (z.empty()) throw std::logic_error("interpolate: empty profile");
  if (height <= z.front()) return c(s, 0);
  if (height >= z.back()) return c(s, static_cast<int>(z.size()) - 1);
  const auto it = std::upper_bound(z.begin(), z.end(), height);
  const int k = static_cast<int>(it - z.begin());
  const double t = (height - z[static_cast<std::size_t>(k - 1)]) / (z[static_cast<std::size_t>(k)] - z[static_cast<std::size_t>(k - 1)]);
  return c(s, k - 1) + t * (c(s, k) - c(s, k - 1));
}

namespace {

struct TruncatedStencil {
  std::vector<double> lower, diag, upper;  // per species, per node
};

}  // namespace

ProfileSolution solve_truncated(const PhysicalProblem& p_in, const TruncatedConfig& cfg) {
  const PhysicalProblem p = validate_problem(p_in);
  const TransformedProblem tp(p, cfg.a, cfg.include_jacobian_factor);
  const int S = p.species_count();
  const int Nz = cfg.Nz;
  if (Nz < 10) throw std::invalid_argument("truncated solver: Nz must be at least 10");
  if (!(cfg.dt > 0.0)) throw std::invalid_argument("truncated solver: dt must be positive");
  cfg.solver.validate();
  check_source_support(tp, cfg.source);

  double max_star = 0.0;
  double max_support = 0.0;
  for (int s = 0; s < S; ++s) {
    const double xs = tp.xi_star(s);
    max_star = std::max(max_star, p.species[static_cast<std::size_t>(s)].z_star);
    max_support = std::max(max_support, 2.0 * cfg.source.h / (cfg.a * (1.0 - xs * xs)));
  }
  if (!(cfg.z_max > max_star + 2.0 * max_support)) {
    throw std::invalid_argument("truncated solver: z_max must exceed the highest source plus twice its support");
  }

  const double dz = cfg.z_max / Nz;
  ProfileSolution out;
  out.z.resize(static_cast<std::size_t>(Nz) + 1);
  for (int j = 0; j <= Nz; ++j) out.z[static_cast<std::size_t>(j)] = cfg.z_max * j / Nz;

  const double w = p.w;
  for (int s = 0; s < S; ++s) {
    const auto& K = p.species[static_cast<std::size_t>(s)].K;
    double kmin = K.min_value();
    const double peclet = std::abs(w) * dz / (2.0 * kmin);
    if (peclet > 1.0) {
      std::ostringstream os;
      os << "species " << s + 1 << ": cell Peclet number " << peclet << " exceeds 1";
      out.warnings.push_back(os.str());
    }
  }

  // Stencil rows j = 0..Nz-1; row j reads lower*c_{j-1} + diag*c_j + upper*c_{j+1}.
  const auto n = static_cast<std::size_t>(S) * static_cast<std::size_t>(Nz);
  TruncatedStencil st{std::vector<double>(n), std::vector<double>(n), std::vector<double>(n)};
  auto at = [Nz](int s, int j) { return static_cast<std::size_t>(s) * static_cast<std::size_t>(Nz) + static_cast<std::size_t>(j); };
  for (int s = 0; s < S; ++s) {
    const auto& sp = p.species[static_cast<std::size_t>(s)];
    for (int j = 0; j < Nz; ++j) {
      const double z = out.z[static_cast<std::size_t>(j)];
      const double k_up = sp.K.value(z + 0.5 * dz);
      if (j == 0) {
        // Ghost node from c_z(0) = delta c(0): c_{-1} = c_1 - 2 dz delta c_0.
        const double k_dn = sp.K.value(0.0);
        st.upper[at(s, j)] = (k_up + k_dn) / (dz * dz);
        st.diag[at(s, j)] = -(k_up + k_dn) / (dz * dz) - 2.0 * k_dn * sp.delta / dz - w * sp.delta;
      } else {
        const double k_dn = sp.K.value(z - 0.5 * dz);
        st.lower[at(s, j)] = k_dn / (dz * dz) + w / (2.0 * dz);
        st.upper[at(s, j)] = k_up / (dz * dz) - w / (2.0 * dz);
        st.diag[at(s, j)] = -(k_up + k_dn) / (dz * dz);
      }
    }
  }

  // Pull the transformed forcing back to z so both solvers see the same f.
  std::vector<double> hat(n, 0.0);
  for (int s = 0; s < S; ++s) {
    if (p.species[static_cast<std::size_t>(s)].Q.is_zero()) continue;
    const double scale = source_scale(tp, s);
    for (int j = 0; j < Nz; ++j) {
      hat[at(s, j)] = scale * delta_hat(z_to_xi(cfg.a, out.z[static_cast<std::size_t>(j)]), tp.xi_star(s), cfg.source.h);
    }
  }

  Field c(S, Nz + 1);
  for (int j = 0; j < Nz; ++j) {
    for (int s = 0; s < S; ++s) c(s, j) = p.species[static_cast<std::size_t>(s)].c0.value(out.z[static_cast<std::size_t>(j)]);
  }

  const TimeGrid time = build_time_grid(p.T, cfg.dt);
  for (int step = 0; step < time.steps(); ++step) {
    const double dt = time.dt(step);
    const double t_new = time.levels[static_cast<std::size_t>(step) + 1];
    const Field c_old = c;
    auto res = [&](const Field& x, std::vector<double>& g) {
      g.resize(n);
      for (int j = 0; j < Nz; ++j) {
        const auto r = reaction_r(p.reactions, x.at_node(j));
        for (int s = 0; s < S; ++s) {
          double lap = st.diag[at(s, j)] * x(s, j) + st.upper[at(s, j)] * x(s, j + 1);
          if (j > 0) lap += st.lower[at(s, j)] * x(s, j - 1);
          const double f = hat[at(s, j)] == 0.0 ? 0.0 : p.species[static_cast<std::size_t>(s)].Q(t_new) * hat[at(s, j)];
          g[static_cast<std::size_t>(j * S + s)] = (x(s, j) - c_old(s, j)) / dt - lap - r[static_cast<std::size_t>(s)] - f;
        }
      }
    };
    auto jac = [&](const Field& x, BlockTridiagonal& J) {
      J.set_zero();
      for (int j = 0; j < Nz; ++j) {
        const auto jr = reaction_jacobian(p.reactions, x.at_node(j));
        for (int s = 0; s < S; ++s) {
          for (int r = 0; r < S; ++r) J.diag(j, s, r) = -jr[static_cast<std::size_t>(s * S + r)];
          J.diag(j, s, s) += 1.0 / dt - st.diag[at(s, j)];
          if (j > 0) J.lower(j, s) = -st.lower[at(s, j)];
          if (j + 1 < Nz) J.upper(j, s) = -st.upper[at(s, j)];
        }
      }
    };
    try {
      auto outcome = newton_iterate(c, res, jac, cfg.solver);
      out.newton_iterations += outcome.iterations;
      c = std::move(outcome.c);
    } catch (const std::exception& e) {
      std::ostringstream os;
      os << "truncated solver, t = " << t_new << ": " << e.what();
      throw MarchError(os.str(), step + 1, t_new);
    }
  }
  out.c = std::move(c);
  return out;
}

ProfileSolution fitted_profile(const Field& c, const TransformedProblem& tp, const SpatialGrid& grid) {
  const int finite = grid.node_count() - 1;
  ProfileSolution out;
  out.c = Field(c.species(), finite);
  for (int i = 0; i < finite; ++i) {
    out.z.push_back(xi_to_z(tp.a(), grid.node(i)));
    for (int s = 0; s < c.species(); ++s) out.c(s, i) = c(s, i);
  }
  return out;
}

ComparisonReport compare(const Field& fitted, const TransformedProblem& tp, const SpatialGrid& grid,
                         const ProfileSolution& reference, double z_lo, double z_hi) {
  const int S = fitted.species();
  if (reference.c.species() != S) throw std::invalid_argument("compare: species count mismatch");
  if (fitted.nodes() != grid.node_count()) throw std::invalid_argument("compare: field does not match grid");
  ComparisonReport rep;
  rep.z_lo = z_lo;
  rep.z_hi = std::min(z_hi, reference.z.back());

  std::vector<double> diff2(static_cast<std::size_t>(S), 0.0), ref2(diff2), dmax(diff2), rmax(diff2);
  for (int i = 0; i + 1 < grid.node_count(); ++i) {
    const double z = xi_to_z(tp.a(), grid.node(i));
    if (z < rep.z_lo || z > rep.z_hi || z < reference.z.front()) continue;
    ++rep.points;
    for (int s = 0; s < S; ++s) {
      const auto k = static_cast<std::size_t>(s);
      const double r = reference.interpolate(s, z);
      const double d = fitted(s, i) - r;
      diff2[k] += d * d;
      ref2[k] += r * r;
      dmax[k] = std::max(dmax[k], std::abs(d));
      rmax[k] = std::max(rmax[k], std::abs(r));
    }
  }
  if (rep.points == 0) throw std::invalid_argument("compare: no fitted nodes inside the comparison window");

  for (int s = 0; s < S; ++s) {
    const auto k = static_cast<std::size_t>(s);
    SpeciesError e;
    e.abs_max = dmax[k];
    e.rel_l2 = ref2[k] > 0.0 ? std::sqrt(diff2[k] / ref2[k]) : (diff2[k] > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
    e.rel_max = rmax[k] > 0.0 ? dmax[k] / rmax[k] : (dmax[k] > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
    rep.species.push_back(e);
  }
  return rep;
}

}  // namespace semifit
