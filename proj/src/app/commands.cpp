#include "semifit/commands.hpp"

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <future>
#include <sstream>

#include "json.hpp"
#include "semifit/convergence.hpp"
#include "semifit/fvm.hpp"
#include "semifit/output.hpp"
#include "semifit/reference.hpp"
#include "semifit/solver.hpp"

namespace semifit {

namespace {

using json = nlohmann::json;

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

json profile_json(const Profile& p) {
  if (p.is_constant()) return p.value(0.0);
  return {{"z", p.table_z()}, {"value", p.table_values()}};
}

json resolved_parameters(const RunConfig& cfg) {
  const auto& p = cfg.problem;
  json species = json::array();
  for (const auto& sp : p.species) {
    species.push_back({{"K", profile_json(sp.K)},
                       {"delta", sp.delta},
                       {"Q", sp.Q.coeffs},
                       {"z_star", sp.z_star},
                       {"c0", profile_json(sp.c0)}});
  }
  const int S = p.species_count();
  json gamma = json::array();
  for (int s = 0; s < S; ++s) {
    json row = json::array();
    for (int i = 0; i < S; ++i) row.push_back(p.reactions.gamma_at(s, i));
    gamma.push_back(row);
  }
  json beta = json::array();
  for (const auto& b : p.reactions.beta) beta.push_back({b.s + 1, b.i + 1, b.j + 1, b.value});
  return {{"problem", {{"w", p.w}, {"species", species}, {"reactions", {{"gamma", gamma}, {"beta", beta}}}}},
          {"transform", {{"a", cfg.a}, {"include_jacobian_factor", cfg.include_jacobian_factor}}},
          {"grid", {{"N", cfg.grid_N}}},
          {"time", {{"dt", cfg.dt}, {"T", p.T}}},
          {"source", {{"h", cfg.source.h}, {"h_fixed_across_grids", true}}},
          {"solver",
           {{"newton_tol", cfg.solver.newton_tol},
            {"newton_max_iter", cfg.solver.newton_max_iter},
            {"nonneg_monitor", cfg.solver.nonneg_monitor}}},
          {"output", {{"snapshot_every", cfg.solver.snapshot_every}, {"format_version", cfg.format_version}}}};
}

json metadata_header(const RunConfig& cfg, const std::string& command) {
  return {{"tool", "semifit"},
          {"version", kToolVersion},
          {"format_version", cfg.format_version},
          {"command", command},
          {"timestamp", utc_timestamp()},
          {"parameters", resolved_parameters(cfg)}};
}

json monitors_json(const Solution& sol) {
  json arr = json::array();
  for (const auto& m : sol.monitors) {
    arr.push_back({{"t", m.t},
                   {"newton_iterations", m.newton_iterations},
                   {"residual_norm", m.residual_norm},
                   {"min_value", m.min_value},
                   {"mass_balance", m.mass_balance}});
  }
  return arr;
}

struct FittedRun {
  Discretization disc;
  Solution sol;
};

// Problems with the discretization setup are configuration errors; failures
// inside the march are solver errors.
Discretization make_discretization(const RunConfig& cfg, int N) {
  try {
    return Discretization(transform_problem(cfg.problem, cfg.a, cfg.include_jacobian_factor), build_uniform_grid(N),
                          cfg.source);
  } catch (const std::invalid_argument& e) {
    throw ConfigError("", e.what());
  }
}

TimeGrid make_time_grid(const RunConfig& cfg) {
  try {
    return build_time_grid(cfg.problem.T, cfg.dt);
  } catch (const std::invalid_argument& e) {
    throw ConfigError("time", e.what());
  }
}

FittedRun run_fitted(const RunConfig& cfg, int N) {
  Discretization disc = make_discretization(cfg, N);
  Solution sol = march(disc, make_time_grid(cfg), cfg.solver);
  return {std::move(disc), std::move(sol)};
}

template <class F>
int guarded(std::ostream& log, F&& body) {
  try {
    return body();
  } catch (const ConfigError& e) {
    log << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const IoError& e) {
    log << "I/O error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::filesystem::filesystem_error& e) {
    log << "I/O error: " << e.what() << '\n';
    return kExitIo;
  } catch (const MarchError& e) {
    log << "solver error at step " << e.step() << " (t = " << e.t() << "): " << e.what() << '\n';
    return kExitSolver;
  } catch (const std::exception& e) {
    log << "solver error: " << e.what() << '\n';
    return kExitSolver;
  }
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace

std::filesystem::path resolve_output_directory(const std::optional<std::string>& cli_out, const RunConfig& cfg) {
  if (cli_out && !cli_out->empty()) return *cli_out;
  if (const char* env = std::getenv(kOutDirEnv); env && *env) return env;
  return cfg.output_directory;
}

std::vector<int> runge_grid_sizes(const RunConfig& cfg) {
  std::vector<int> n = cfg.grid_N;
  if (n.size() == 1) n = {n[0], 2 * n[0], 4 * n[0]};
  if (n.size() != 3) throw ConfigError("grid.N", "a Runge study needs one N or exactly three values");
  if (n[1] != 2 * n[0] || n[2] != 2 * n[1]) throw ConfigError("grid.N", "grids are not nested (need N, 2N, 4N)");
  return n;
}

int cmd_solve(const RunConfig& cfg, const std::filesystem::path& out, std::ostream& log) {
  return guarded(log, [&] {
    const int N = cfg.grid_N.front();
    log << "solve: N = " << N << ", dt = " << cfg.dt << ", T = " << cfg.problem.T << '\n';
    const FittedRun run = run_fitted(cfg, N);

    std::ostringstream csv;
    write_solution_csv(csv, run.sol, run.disc.tp, run.disc.grid);
    write_text_file(out / "solution.csv", csv.str());

    json meta = metadata_header(cfg, "solve");
    meta["min_value"] = run.sol.min_value();
    meta["snapshots"] = run.sol.snapshots.size();
    meta["monitors"] = monitors_json(run.sol);
    write_text_file(out / "solution.meta.json", dump(meta));
    log << "solve: min value " << run.sol.min_value() << ", wrote " << (out / "solution.csv").string() << '\n';
    return kExitOk;
  });
}

int cmd_runge(const RunConfig& cfg, const std::filesystem::path& out, std::ostream& log) {
  return guarded(log, [&] {
    const std::vector<int> n = runge_grid_sizes(cfg);
    log << "runge: N = " << n[0] << ", " << n[1] << ", " << n[2] << '\n';
    // Validate once up front so configuration errors surface before the solves.
    make_discretization(cfg, n[0]);
    std::vector<std::future<FittedRun>> jobs;
    for (int N : n) jobs.push_back(std::async(std::launch::async, [&cfg, N] { return run_fitted(cfg, N); }));
    std::vector<FittedRun> runs;
    for (auto& j : jobs) runs.push_back(j.get());

    const RateTable table = runge_rates(runs[0].sol.final_field(), runs[1].sol.final_field(), runs[2].sol.final_field(),
                                        runs[0].disc.grid, runs[1].disc.grid, runs[2].disc.grid);
    std::ostringstream csv;
    write_rates_csv(csv, table);
    write_text_file(out / "runge_rates.csv", csv.str());

    json meta = metadata_header(cfg, "runge");
    meta["grid_N"] = n;
    json mins = json::array();
    for (const auto& r : runs) mins.push_back(r.sol.min_value());
    meta["min_value"] = mins;
    write_text_file(out / "runge_rates.meta.json", dump(meta));
    log << "runge: wrote " << (out / "runge_rates.csv").string() << '\n';
    return kExitOk;
  });
}

int cmd_compare(const RunConfig& cfg, const std::filesystem::path& out, std::ostream& log) {
  return guarded(log, [&] {
    if (!cfg.reference) throw ConfigError("reference", "missing section");
    const ReferenceSection& ref = *cfg.reference;
    const int N = cfg.grid_N.front();
    log << "compare: fitted N = " << N << " against " << ref.mode << " reference\n";
    const FittedRun run = run_fitted(cfg, N);
    const Field& fitted = run.sol.final_field();

    json reference_params = {{"mode", ref.mode}};
    ProfileSolution profile;
    if (ref.mode == "self") {
      profile = fitted_profile(fitted, run.disc.tp, run.disc.grid);
      reference_params["N"] = N;
    } else {
      TruncatedConfig tc;
      tc.z_max = ref.z_max;
      tc.Nz = ref.Nz;
      tc.dt = cfg.dt;
      tc.a = cfg.a;
      tc.include_jacobian_factor = cfg.include_jacobian_factor;
      tc.source = cfg.source;
      tc.solver = cfg.solver;
      try {
        profile = solve_truncated(cfg.problem, tc);
      } catch (const std::invalid_argument& e) {
        throw ConfigError("reference", e.what());
      }
      reference_params.update({{"z_max", ref.z_max}, {"Nz", ref.Nz}, {"dt", cfg.dt}});
    }
    for (const auto& w : profile.warnings) log << "warning: " << w << '\n';

    ComparisonReport rep;
    try {
      rep = compare(fitted, run.disc.tp, run.disc.grid, profile, ref.z_lo, ref.z_hi);
    } catch (const std::invalid_argument& e) {
      throw ConfigError("reference.z_window", e.what());
    }

    json errors = json::array();
    for (std::size_t s = 0; s < rep.species.size(); ++s) {
      const auto& e = rep.species[s];
      errors.push_back({{"species", s + 1}, {"rel_l2", e.rel_l2}, {"rel_max", e.rel_max}, {"abs_max", e.abs_max}});
      log << "  species " << s + 1 << ": rel L2 " << e.rel_l2 << ", rel max " << e.rel_max << '\n';
    }
    json report = metadata_header(cfg, "compare");
    report["fitted"] = {{"N", N}, {"a", cfg.a}, {"dt", cfg.dt}, {"h", cfg.source.h}};
    report["reference"] = reference_params;
    report["window"] = {rep.z_lo, rep.z_hi};
    report["points"] = rep.points;
    report["t"] = cfg.problem.T;
    report["errors"] = errors;
    report["warnings"] = profile.warnings;
    write_text_file(out / "compare_report.json", dump(report));
    return kExitOk;
  });
}

int cmd_check_conditions(const RunConfig& cfg, const std::filesystem::path& out, std::ostream& log) {
  return guarded(log, [&] {
    if (!cfg.conditions) throw ConfigError("conditions", "missing section");
    const auto& cs = *cfg.conditions;
    if (static_cast<int>(cs.box.size()) != cfg.problem.species_count()) {
      throw ConfigError("conditions.box", "need one bound per species");
    }
    const Discretization disc = make_discretization(cfg, cfg.grid_N.front());
    const ConditionReport rep = check_sign_conditions(disc.tp, disc.grid, cs.box, cs.samples_per_axis);

    json witnesses = json::array();
    for (const auto& w : rep.witnesses) {
      witnesses.push_back({{"condition", std::string(1, w.condition)},
                           {"species", w.species + 1},
                           {"xi", w.xi},
                           {"t", w.t},
                           {"c", w.c},
                           {"value", w.value}});
    }
    json report = metadata_header(cfg, "check-conditions");
    report["box"] = cs.box;
    report["samples_per_axis"] = cs.samples_per_axis;
    report["checked"] = {{"a", rep.checked_a}, {"b", rep.checked_b}, {"c", rep.checked_c}};
    report["violations"] = {{"a", rep.violations_a}, {"b", rep.violations_b}, {"c", rep.violations_c}};
    report["witnesses"] = witnesses;
    write_text_file(out / "conditions_report.json", dump(report));

    log << "conditions: a) " << rep.violations_a << "/" << rep.checked_a << ", b) " << rep.violations_b << "/"
        << rep.checked_b << ", c) " << rep.violations_c << "/" << rep.checked_c << " violations\n";
    for (const auto& w : rep.witnesses) {
      if (w.condition != 'b') continue;
      log << "  b) witness: species " << w.species + 1 << ", xi = " << w.xi << ", value " << w.value << '\n';
    }
    return rep.violations_b > 0 ? kExitFindings : kExitOk;
  });
}

}  // namespace semifit
