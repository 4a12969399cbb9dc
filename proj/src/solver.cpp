#include "semifit/solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "semifit/transform.hpp"

namespace semifit {

void SolverConfig::validate() const {
  if (!(newton_tol > 0.0)) throw std::invalid_argument("newton_tol must be positive");
  if (newton_max_iter < 1) throw std::invalid_argument("newton_max_iter must be at least 1");
  if (snapshot_every < 1) throw std::invalid_argument("snapshot_every must be at least 1");
}

double Solution::min_value() const {
  double m = snapshots.empty() ? 0.0 : snapshots.front().c.min();
  for (const auto& snap : snapshots) m = std::min(m, snap.c.min());
  for (const auto& mon : monitors) m = std::min(m, mon.min_value);
  return m;
}

namespace {

constexpr double kPolishFraction = 1e-3;

void check_fields(const Discretization& disc, const Field& a, const Field& b) {
  if (a.species() != disc.species() || a.nodes() != disc.intervals() + 1 || !a.same_shape(b)) {
    throw std::invalid_argument("field shape does not match the discretization");
  }
}

std::size_t unknown(int S, int s, int i) {
  return static_cast<std::size_t>(i) * static_cast<std::size_t>(S) + static_cast<std::size_t>(s);
}

void fill_residual(const Discretization& disc, const Field& c_new, const Field& c_old, double dt, double t_new,
                   std::vector<double>& g) {
  const int S = disc.species();
  const int N = disc.intervals();
  const auto& net = disc.tp.base().reactions;
  g.resize(static_cast<std::size_t>(S) * static_cast<std::size_t>(N));
  for (int i = 0; i < N; ++i) {
    const double w = disc.table.weight(i);
    const auto r = reaction_r(net, c_new.at_node(i));
    for (int s = 0; s < S; ++s) {
      const double b = r[static_cast<std::size_t>(s)] - disc.table.d(s, i) * c_new(s, i);
      g[unknown(S, s, i)] = w * (c_new(s, i) - c_old(s, i)) / dt - apply_stencil(disc.table, s, i, c_new) -
                            w * (b + disc.source(s, i, t_new));
    }
  }
}

void fill_jacobian(const Discretization& disc, const Field& c_new, double dt, BlockTridiagonal& J) {
  const int S = disc.species();
  const int N = disc.intervals();
  const auto& net = disc.tp.base().reactions;
  J.set_zero();
  for (int i = 0; i < N; ++i) {
    const double w = disc.table.weight(i);
    const auto jr = reaction_jacobian(net, c_new.at_node(i));
    for (int s = 0; s < S; ++s) {
      for (int r = 0; r < S; ++r) J.diag(i, s, r) = -w * jr[static_cast<std::size_t>(s * S + r)];
      J.diag(i, s, s) += w / dt + disc.table.diag(s, i) + w * disc.table.d(s, i);
      if (i > 0) J.lower(i, s) = -disc.table.lower(s, i);
      if (i + 1 < N) J.upper(i, s) = -disc.table.upper(s, i);
    }
  }
}

double inf_norm(const std::vector<double>& v, std::size_t* where = nullptr) {
  double m = 0.0;
  std::size_t at = 0;
  for (std::size_t k = 0; k < v.size(); ++k) {
    const double a = std::abs(v[k]);
    if (a > m || std::isnan(a)) {
      m = a;
      at = k;
      if (std::isnan(a)) break;
    }
  }
  if (where) *where = at;
  return m;
}

}  // namespace

std::vector<double> residual(const Discretization& disc, const Field& c_new, const Field& c_old, double dt,
                             double t_new) {
  check_fields(disc, c_new, c_old);
  if (!(dt > 0.0)) throw std::invalid_argument("residual: dt must be positive");
  std::vector<double> g;
  fill_residual(disc, c_new, c_old, dt, t_new, g);
  return g;
}

BlockTridiagonal step_jacobian(const Discretization& disc, const Field& c_new, double dt, double /*t_new*/) {
  check_fields(disc, c_new, c_new);
  if (!(dt > 0.0)) throw std::invalid_argument("step_jacobian: dt must be positive");
  BlockTridiagonal J(disc.intervals(), disc.species());
  fill_jacobian(disc, c_new, dt, J);
  return J;
}

NewtonOutcome newton_iterate(Field start, const std::function<void(const Field&, std::vector<double>&)>& res,
                             const std::function<void(const Field&, BlockTridiagonal&)>& jac,
                             const SolverConfig& cfg) {
  const int S = start.species();
  const int n = start.nodes() - 1;
  NewtonOutcome out{std::move(start), 0, 0.0};
  std::vector<double> g;
  res(out.c, g);
  std::size_t worst = 0;
  out.residual_norm = inf_norm(g, &worst);

  BlockTridiagonal J(n, S);
  while (!(out.residual_norm <= cfg.newton_tol)) {
    if (out.iterations >= cfg.newton_max_iter || !std::isfinite(out.residual_norm)) {
      const int ws = static_cast<int>(worst % static_cast<std::size_t>(S));
      const int wn = static_cast<int>(worst / static_cast<std::size_t>(S));
      std::ostringstream os;
      os << "Newton did not converge after " << out.iterations << " iterations: residual " << out.residual_norm
         << " (worst: species " << ws + 1 << ", node " << wn + 1 << ")";
      throw NewtonError(os.str(), out.residual_norm, ws, wn);
    }
    jac(out.c, J);
    const auto delta = solve_block_tridiagonal(J, g);
    auto& x = out.c.data();
    for (std::size_t k = 0; k < delta.size(); ++k) x[k] -= delta[k];
    res(out.c, g);
    out.residual_norm = inf_norm(g, &worst);
    ++out.iterations;
  }
  // A residual just under the tolerance still leaves the discrete balance
  // off by up to N * tol; one more quadratic step takes it to rounding.
  if (out.iterations > 0 && out.residual_norm > kPolishFraction * cfg.newton_tol) {
    jac(out.c, J);
    const auto delta = solve_block_tridiagonal(J, g);
    Field trial = out.c;
    auto& x = trial.data();
    for (std::size_t k = 0; k < delta.size(); ++k) x[k] -= delta[k];
    std::vector<double> g_trial;
    res(trial, g_trial);
    const double norm = inf_norm(g_trial);
    if (norm < out.residual_norm) {
      out.c = std::move(trial);
      out.residual_norm = norm;
      ++out.iterations;
    }
  }
  return out;
}

NewtonOutcome newton_solve(const Discretization& disc, const Field& c_old, double dt, double t_new,
                           const SolverConfig& cfg) {
  check_fields(disc, c_old, c_old);
  if (!(dt > 0.0)) throw std::invalid_argument("newton_solve: dt must be positive");
  return newton_iterate(
      c_old, [&](const Field& c, std::vector<double>& g) { fill_residual(disc, c, c_old, dt, t_new, g); },
      [&](const Field& c, BlockTridiagonal& J) { fill_jacobian(disc, c, dt, J); }, cfg);
}

std::vector<double> mass_balance_defect(const Discretization& disc, const Field& c_new, const Field& c_old, double dt,
                                        double t_new) {
  check_fields(disc, c_new, c_old);
  const int S = disc.species();
  const int N = disc.intervals();
  const auto& net = disc.tp.base().reactions;
  std::vector<double> change(static_cast<std::size_t>(S), 0.0), production(change), scale(change);
  for (int i = 0; i < N; ++i) {
    const double w = disc.table.weight(i);
    const auto r = reaction_r(net, c_new.at_node(i));
    for (int s = 0; s < S; ++s) {
      const auto k = static_cast<std::size_t>(s);
      const double dc = w * (c_new(s, i) - c_old(s, i)) / dt;
      const double src = w * (r[k] - disc.table.d(s, i) * c_new(s, i) + disc.source(s, i, t_new));
      change[k] += dc;
      production[k] += src;
      scale[k] += std::abs(dc) + std::abs(src);
    }
  }
  std::vector<double> defect(static_cast<std::size_t>(S));
  for (int s = 0; s < S; ++s) {
    const auto k = static_cast<std::size_t>(s);
    const double top = disc.table.face(s, N - 1)(c_new(s, N - 1), c_new(s, N));
    const double ground = disc.table.robin(s) * c_new(s, 0);
    const double denom = scale[k] + std::abs(top) + std::abs(ground);
    const double gap = change[k] - (top - ground) - production[k];
    defect[k] = denom > 0.0 ? std::abs(gap) / denom : 0.0;
  }
  return defect;
}

Field initial_field(const Discretization& disc) {
  const int S = disc.species();
  const int N = disc.intervals();
  Field c(S, N + 1);
  for (int i = 0; i < N; ++i) {
    for (int s = 0; s < S; ++s) c(s, i) = disc.tp.initial(s, disc.grid.node(i));
  }
  return c;
}

Solution march(const Discretization& disc, const TimeGrid& time, const SolverConfig& cfg) {
  cfg.validate();
  Solution sol;
  Field c = initial_field(disc);
  sol.snapshots.push_back({time.levels.front(), c});
  sol.monitors.reserve(static_cast<std::size_t>(time.steps()));

  for (int j = 0; j < time.steps(); ++j) {
    const double dt = time.dt(j);
    const double t_new = time.levels[static_cast<std::size_t>(j) + 1];
    NewtonOutcome step;
    try {
      step = newton_solve(disc, c, dt, t_new, cfg);
    } catch (const std::exception& e) {
      std::ostringstream os;
      os << "time level " << j + 2 << " (t = " << t_new << "): " << e.what();
      throw MarchError(os.str(), j + 1, t_new);
    }
    StepMonitor mon;
    mon.t = t_new;
    mon.newton_iterations = step.iterations;
    mon.residual_norm = step.residual_norm;
    mon.min_value = cfg.nonneg_monitor ? step.c.min() : 0.0;
    mon.mass_balance = mass_balance_defect(disc, step.c, c, dt, t_new);
    sol.monitors.push_back(std::move(mon));

    c = std::move(step.c);
    const bool last = j + 1 == time.steps();
    if (last || (j + 1) % cfg.snapshot_every == 0) sol.snapshots.push_back({t_new, c});
  }
  return sol;
}

ConditionReport check_sign_conditions(const TransformedProblem& tp, const SpatialGrid& grid,
                                          const std::vector<double>& box, int samples_per_axis) {
  const int S = tp.species_count();
  if (static_cast<int>(box.size()) != S) throw std::invalid_argument("condition check: box needs one bound per species");
  if (samples_per_axis < 1) throw std::invalid_argument("condition check: samples_per_axis must be >= 1");
  for (double m : box) {
    if (!(m >= 0.0)) throw std::invalid_argument("condition check: box bounds must be non-negative");
  }
  constexpr std::size_t kMaxWitnesses = 10;
  ConditionReport rep;
  std::size_t wa = 0, wb = 0, wc = 0;
  const int n = samples_per_axis;
  auto lattice = [&](int r, int k) { return n == 1 ? 0.0 : box[static_cast<std::size_t>(r)] * k / (n - 1); };

  // a) sign of the regularized source over time.
  for (int s = 0; s < S; ++s) {
    const double T = tp.base().T;
    for (int k = 0; k < std::max(n, 2); ++k) {
      const double t = T * k / (std::max(n, 2) - 1);
      const double f = tp.source_intensity(s, t);
      ++rep.checked_a;
      if (f < 0.0) {
        ++rep.violations_a;
        if (wa++ < kMaxWitnesses) rep.witnesses.push_back({'a', s, tp.xi_star(s), t, {}, f});
      }
    }
  }

  std::vector<int> idx(static_cast<std::size_t>(S));
  std::vector<double> c(static_cast<std::size_t>(S));
  for (int s = 0; s < S; ++s) {
    for (char cond : {'b', 'c'}) {
      std::fill(idx.begin(), idx.end(), 0);
      // Odometer over every species but s.
      while (true) {
        for (int r = 0; r < S; ++r) c[static_cast<std::size_t>(r)] = lattice(r, idx[static_cast<std::size_t>(r)]);
        c[static_cast<std::size_t>(s)] = cond == 'b' ? 0.0 : box[static_cast<std::size_t>(s)];
        const double reaction = reaction_r(tp.base().reactions, c)[static_cast<std::size_t>(s)];
        for (int i = 0; i < grid.node_count(); ++i) {
          const double xi = grid.node(i);
          const double b = reaction - eval_coefficients(tp, s, xi).d * c[static_cast<std::size_t>(s)];
          if (cond == 'b') {
            ++rep.checked_b;
            if (b < 0.0) {
              ++rep.violations_b;
              if (wb++ < kMaxWitnesses) rep.witnesses.push_back({'b', s, xi, 0.0, c, b});
            }
          } else {
            ++rep.checked_c;
            if (b > 0.0) {
              ++rep.violations_c;
              if (wc++ < kMaxWitnesses) rep.witnesses.push_back({'c', s, xi, 0.0, c, b});
            }
          }
        }
        int r = 0;
        for (; r < S; ++r) {
          if (r == s) continue;
          if (++idx[static_cast<std::size_t>(r)] < n) break;
          idx[static_cast<std::size_t>(r)] = 0;
        }
        if (r == S) break;
      }
    }
  }
  return rep;
}

}  // namespace semifit
