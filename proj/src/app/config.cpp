#include "semifit/config.hpp"

#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"

namespace semifit {

namespace {

using json = nlohmann::json;

// Wraps one JSON object, remembering which keys were consumed so the rest can
// be reported as unknown.
class Section {
 public:
  Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(path_, "expected an object");
  }

  std::string key_path(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  bool has(const std::string& key) const { return j_.contains(key); }

  const json& required(const std::string& key) {
    if (!j_.contains(key)) throw ConfigError(key_path(key), "missing required key");
    used_.insert(key);
    return j_.at(key);
  }

  const json* optional(const std::string& key) {
    if (!j_.contains(key)) return nullptr;
    used_.insert(key);
    return &j_.at(key);
  }

  double number(const std::string& key) { return as_number(required(key), key_path(key)); }
  double number_or(const std::string& key, double fallback) {
    const json* v = optional(key);
    return v ? as_number(*v, key_path(key)) : fallback;
  }
  int integer(const std::string& key) { return as_int(required(key), key_path(key)); }
  int integer_or(const std::string& key, int fallback) {
    const json* v = optional(key);
    return v ? as_int(*v, key_path(key)) : fallback;
  }
  bool boolean_or(const std::string& key, bool fallback) {
    const json* v = optional(key);
    if (!v) return fallback;
    if (!v->is_boolean()) throw ConfigError(key_path(key), "expected true or false");
    return v->get<bool>();
  }
  std::string string_or(const std::string& key, const std::string& fallback) {
    const json* v = optional(key);
    if (!v) return fallback;
    if (!v->is_string()) throw ConfigError(key_path(key), "expected a string");
    return v->get<std::string>();
  }

  void reject_unknown() const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!used_.count(it.key())) throw ConfigError(key_path(it.key()), "unknown key");
    }
  }

  static double as_number(const json& v, const std::string& path) {
    if (!v.is_number()) throw ConfigError(path, "expected a number");
    return v.get<double>();
  }
  static int as_int(const json& v, const std::string& path) {
    if (!v.is_number_integer()) throw ConfigError(path, "expected an integer");
    return v.get<int>();
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> used_;
};

std::vector<double> number_list(const json& v, const std::string& path) {
  if (!v.is_array()) throw ConfigError(path, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t k = 0; k < v.size(); ++k) out.push_back(Section::as_number(v[k], path + "[" + std::to_string(k) + "]"));
  return out;
}

Profile parse_profile(const json& v, const std::string& path) {
  if (v.is_number()) return Profile::constant(v.get<double>());
  Section sec(v, path);
  auto z = number_list(sec.required("z"), sec.key_path("z"));
  auto values = number_list(sec.required("value"), sec.key_path("value"));
  sec.reject_unknown();
  try {
    return Profile::tabulated(std::move(z), std::move(values));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(path, e.what());
  }
}

Polynomial parse_polynomial(const json& v, const std::string& path) {
  if (v.is_number()) return Polynomial{{v.get<double>()}};
  return Polynomial{number_list(v, path)};
}

SpeciesSpec parse_species(const json& v, const std::string& path) {
  Section sec(v, path);
  SpeciesSpec sp;
  sp.K = parse_profile(sec.required("K"), sec.key_path("K"));
  sp.delta = sec.number_or("delta", 0.0);
  if (const json* q = sec.optional("Q")) sp.Q = parse_polynomial(*q, sec.key_path("Q"));
  sp.z_star = sec.number_or("z_star", 0.0);
  if (const json* c0 = sec.optional("c0")) sp.c0 = parse_profile(*c0, sec.key_path("c0"));
  sec.reject_unknown();
  return sp;
}

ReactionNetwork parse_reactions(const json& v, const std::string& path, int S) {
  Section sec(v, path);
  ReactionNetwork net = ReactionNetwork::zero(S);
  if (const json* g = sec.optional("gamma")) {
    const std::string gp = sec.key_path("gamma");
    if (!g->is_array()) throw ConfigError(gp, "expected an array of rows");
    std::vector<double> flat;
    std::size_t cols = 0;
    for (std::size_t r = 0; r < g->size(); ++r) {
      const auto row = number_list((*g)[r], gp + "[" + std::to_string(r) + "]");
      if (r == 0) cols = row.size();
      if (row.size() != cols) throw ConfigError(gp, "rows have different lengths");
      flat.insert(flat.end(), row.begin(), row.end());
    }
    if (g->size() != cols) throw ConfigError(gp, "gamma must be square");
    net.gamma = std::move(flat);
    net.species_count = static_cast<int>(cols);
  }
  if (const json* b = sec.optional("beta")) {
    const std::string bp = sec.key_path("beta");
    if (!b->is_array()) throw ConfigError(bp, "expected an array of [s, i, j, value] entries");
    for (std::size_t k = 0; k < b->size(); ++k) {
      const std::string ep = bp + "[" + std::to_string(k) + "]";
      const auto& e = (*b)[k];
      if (!e.is_array() || e.size() != 4) throw ConfigError(ep, "expected [s, i, j, value] with 1-based indices");
      BilinearTerm t;
      t.s = Section::as_int(e[0], ep) - 1;
      t.i = Section::as_int(e[1], ep) - 1;
      t.j = Section::as_int(e[2], ep) - 1;
      t.value = Section::as_number(e[3], ep);
      net.beta.push_back(t);
    }
  }
  sec.reject_unknown();
  return net;
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("", std::string("malformed JSON: ") + e.what());
  }
  Section top(root, "");
  RunConfig cfg;

  {
    Section prob(top.required("problem"), "problem");
    const std::string sp = prob.key_path("species");
    const json& species = prob.required("species");
    if (!species.is_array() || species.empty()) throw ConfigError(sp, "expected a non-empty array");
    for (std::size_t s = 0; s < species.size(); ++s) {
      cfg.problem.species.push_back(parse_species(species[s], sp + "[" + std::to_string(s) + "]"));
    }
    cfg.problem.w = prob.number("w");
    const int S = cfg.problem.species_count();
    cfg.problem.reactions =
        prob.has("reactions") ? parse_reactions(prob.required("reactions"), "problem.reactions", S) : ReactionNetwork::zero(S);
    prob.reject_unknown();
  }
  {
    Section tr(top.required("transform"), "transform");
    cfg.a = tr.number("a");
    if (!(cfg.a > 0.0)) throw ConfigError("transform.a", "stretching factor must be positive");
    cfg.include_jacobian_factor = tr.boolean_or("include_jacobian_factor", false);
    tr.reject_unknown();
  }
  {
    Section gr(top.required("grid"), "grid");
    const json& n = gr.required("N");
    if (n.is_array()) {
      for (std::size_t k = 0; k < n.size(); ++k) cfg.grid_N.push_back(Section::as_int(n[k], "grid.N[" + std::to_string(k) + "]"));
    } else {
      cfg.grid_N.push_back(Section::as_int(n, "grid.N"));
    }
    if (cfg.grid_N.empty()) throw ConfigError("grid.N", "empty list");
    for (int N : cfg.grid_N) {
      if (N < 3) throw ConfigError("grid.N", "need at least 3 intervals");
    }
    gr.reject_unknown();
  }
  {
    Section tm(top.required("time"), "time");
    cfg.dt = tm.number("dt");
    cfg.problem.T = tm.number("T");
    if (!(cfg.dt > 0.0) || cfg.dt > cfg.problem.T) throw ConfigError("time.dt", "need 0 < dt <= T");
    tm.reject_unknown();
  }
  {
    Section src(top.required("source"), "source");
    cfg.source.h = src.number("h");
    if (!(cfg.source.h > 0.0)) throw ConfigError("source.h", "must be positive");
    src.reject_unknown();
  }
  {
    Section sol(top.required("solver"), "solver");
    cfg.solver.newton_tol = sol.number_or("newton_tol", cfg.solver.newton_tol);
    cfg.solver.newton_max_iter = sol.integer_or("newton_max_iter", cfg.solver.newton_max_iter);
    cfg.solver.nonneg_monitor = sol.boolean_or("nonneg_monitor", cfg.solver.nonneg_monitor);
    sol.reject_unknown();
  }
  {
    Section out(top.required("output"), "output");
    cfg.output_directory = out.string_or("directory", cfg.output_directory);
    cfg.solver.snapshot_every = out.integer_or("snapshot_every", 10);
    cfg.format_version = out.integer_or("format_version", 1);
    if (cfg.format_version != 1) throw ConfigError("output.format_version", "only version 1 is supported");
    out.reject_unknown();
  }
  try {
    cfg.solver.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError("solver", e.what());
  }
  if (const json* r = top.optional("reference")) {
    Section ref(*r, "reference");
    ReferenceSection rs;
    rs.mode = ref.string_or("mode", rs.mode);
    if (rs.mode != "truncated" && rs.mode != "self") throw ConfigError("reference.mode", "expected \"truncated\" or \"self\"");
    rs.z_max = ref.number_or("z_max", rs.z_max);
    rs.Nz = ref.integer_or("Nz", rs.Nz);
    if (const json* win = ref.optional("z_window")) {
      const auto v = number_list(*win, "reference.z_window");
      if (v.size() != 2 || !(v[0] < v[1])) throw ConfigError("reference.z_window", "expected [z_lo, z_hi] with z_lo < z_hi");
      rs.z_lo = v[0];
      rs.z_hi = v[1];
    }
    ref.reject_unknown();
    cfg.reference = rs;
  }
  if (const json* c = top.optional("conditions")) {
    Section cond(*c, "conditions");
    ConditionsSection cs;
    cs.box = number_list(cond.required("box"), "conditions.box");
    cs.samples_per_axis = cond.integer_or("samples_per_axis", cs.samples_per_axis);
    if (cs.samples_per_axis < 1) throw ConfigError("conditions.samples_per_axis", "must be at least 1");
    for (double m : cs.box) {
      if (!(m >= 0.0)) throw ConfigError("conditions.box", "bounds must be non-negative");
    }
    cond.reject_unknown();
    cfg.conditions = cs;
  }
  top.reject_unknown();

  try {
    cfg.problem = validate_problem(std::move(cfg.problem));
  } catch (const ProblemError& e) {
    throw ConfigError("problem", e.what());
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot read config file '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return parse_config(os.str());
}

namespace {

const std::map<std::string, std::string>& presets() {
  static const std::map<std::string, std::string> table = {
      {"paper-s4", R"({
  "problem": {
    "w": 1.0,
    "species": [
      {"K": 1.0, "delta": 0.0, "Q": [0.0, 1.0], "z_star": 20.0, "c0": 0.0},
      {"K": 5.0, "delta": 0.0, "Q": [1.0, -1.0], "z_star": 85.0, "c0": 0.0},
      {"K": 5.0, "delta": 0.0, "Q": [0.0], "z_star": 0.0, "c0": 2.0}
    ],
    "reactions": {
      "gamma": [[0, 2000, 0], [0, -2000, 0], [0, 2000, 0]],
      "beta": [[1, 1, 3, -1000], [2, 1, 3, 1000], [3, 1, 3, -1000]]
    }
  },
  "transform": {"a": 0.005, "include_jacobian_factor": false},
  "grid": {"N": 100},
  "time": {"dt": 0.001, "T": 1.0},
  "source": {"h": 0.01},
  "solver": {"newton_tol": 1e-10, "newton_max_iter": 25, "nonneg_monitor": true},
  "output": {"directory": "out", "snapshot_every": 10, "format_version": 1},
  "reference": {"mode": "truncated", "z_max": 2000.0, "Nz": 2000, "z_window": [0.0, 300.0]},
  "conditions": {"box": [10.0, 10.0, 10.0], "samples_per_axis": 21}
})"},
  };
  return table;
}

}  // namespace

std::vector<std::string> preset_names() {
  std::vector<std::string> names;
  for (const auto& [name, _] : presets()) names.push_back(name);
  return names;
}

std::string preset_text(const std::string& name) {
  const auto it = presets().find(name);
  if (it == presets().end()) throw ConfigError("", "unknown preset '" + name + "'");
  return it->second;
}

}  // namespace semifit
