#include "edgerec/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace edgerec {

namespace {

using nlohmann::json;

void reject_unknown(const json& obj, const std::string& where, const std::set<std::string>& known) {
  if (!obj.is_object()) throw ConfigError(where + ": expected an object");
  for (const auto& item : obj.items()) {
    if (!known.count(item.key())) {
      throw ConfigError("unknown key '" + (where.empty() ? "" : where + ".") + item.key() + "'");
    }
  }
}

std::string key_path(const std::string& where, const std::string& key) {
  return where.empty() ? key : where + "." + key;
}

double get_number(const json& obj, const std::string& where, const std::string& key, double fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number()) throw ConfigError(key_path(where, key) + ": expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ConfigError(key_path(where, key) + ": must be finite");
  return x;
}

int get_int(const json& obj, const std::string& where, const std::string& key, int fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number_integer()) throw ConfigError(key_path(where, key) + ": expected an integer");
  return v.get<int>();
}

std::string get_string(const json& obj, const std::string& where, const std::string& key,
                       const std::string& fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_string()) throw ConfigError(key_path(where, key) + ": expected a string");
  return v.get<std::string>();
}

std::vector<double> get_numbers(const json& obj, const std::string& where, const std::string& key,
                                const std::vector<double>& fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_array()) throw ConfigError(key_path(where, key) + ": expected an array of numbers");
  std::vector<double> out;
  for (const auto& e : v) {
    if (!e.is_number()) throw ConfigError(key_path(where, key) + ": expected an array of numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

void require(bool ok, const std::string& key, const std::string& what) {
  if (!ok) throw ConfigError(key + ": " + what);
}

DomainWallSpec parse_material(const json& j) {
  const std::string w = "material";
  reject_unknown(j, w, {"a0", "C", "perturbation", "delta", "eta_infinity", "wall_profile"});
  DomainWallSpec spec;
  require(j.contains("a0"), "material.a0", "required");
  spec.bulk.a0 = get_number(j, w, "a0", 0.0);
  const auto c = get_numbers(j, w, "C", {0.0, 0.0, 0.0, 0.0});
  require(c.size() == 4, "material.C", "expected 4 numbers (row-major 2x2)");
  spec.bulk.C << c[0], c[1], c[2], c[3];

  spec.delta = get_number(j, w, "delta", 0.0);
  require(spec.delta >= 0.0, "material.delta", "must be non-negative");
  spec.wall.eta_infinity = get_number(j, w, "eta_infinity", 1.0);
  require(spec.wall.eta_infinity > 0.0, "material.eta_infinity", "must be positive");
  spec.wall.name = get_string(j, w, "wall_profile", "tanh");
  require(spec.wall.name == "tanh" || spec.wall.name == "erf" || spec.wall.name == "step",
          "material.wall_profile", "expected one of tanh, erf, step");

  if (j.contains("perturbation")) {
    const json& p = j.at("perturbation");
    const std::string pw = "material.perturbation";
    reject_unknown(p, pw, {"kind", "terms"});
    const std::string kind = get_string(p, pw, "kind", "p_breaking");
    if (kind == "p_breaking") {
      spec.perturbation.kind = PerturbationKind::PBreaking;
    } else if (kind == "c_breaking") {
      spec.perturbation.kind = PerturbationKind::CBreaking;
    } else if (kind == "custom") {
      spec.perturbation.kind = PerturbationKind::CustomFourier;
    } else {
      throw ConfigError(pw + ".kind: expected one of p_breaking, c_breaking, custom");
    }
    if (p.contains("terms")) {
      require(kind == "custom", pw + ".terms", "only allowed with kind 'custom'");
      require(p.at("terms").is_array(), pw + ".terms", "expected an array");
      for (const auto& t : p.at("terms")) {
        const std::string tw = pw + ".terms[]";
        reject_unknown(t, tw, {"m1", "m2", "coeff"});
        FourierTerm term;
        term.m1 = get_int(t, tw, "m1", 0);
        term.m2 = get_int(t, tw, "m2", 0);
        const auto v = get_numbers(t, tw, "coeff", {});
        require(v.size() == 8, tw + ".coeff", "expected 8 numbers (re, im pairs, row-major)");
        term.coeff << cplx(v[0], v[1]), cplx(v[2], v[3]), cplx(v[4], v[5]), cplx(v[6], v[7]);
        spec.perturbation.terms.push_back(term);
      }
    }
  }
  return spec;
}

RunConfig from_json(const json& root) {
  reject_unknown(root, "", {"material", "mesh", "sweep", "solver", "classify", "convergence", "output"});
  if (!root.contains("material")) throw ConfigError("material: required section missing");
  RunConfig cfg;
  cfg.material = parse_material(root.at("material"));

  if (root.contains("mesh")) {
    const json& j = root.at("mesh");
    reject_unknown(j, "mesh", {"N", "L", "diagonal", "quad_order"});
    cfg.mesh.N = get_int(j, "mesh", "N", cfg.mesh.N);
    cfg.mesh.L = get_int(j, "mesh", "L", cfg.mesh.L);
    try {
      cfg.mesh.diagonal = parse_diagonal(get_string(j, "mesh", "diagonal", "regular"));
    } catch (const std::exception& e) {
      throw ConfigError(std::string("mesh.diagonal: ") + e.what());
    }
    cfg.mesh.quad_order = get_int(j, "mesh", "quad_order", cfg.mesh.quad_order);
  }
  require(cfg.mesh.N >= 2, "mesh.N", "must be at least 2");
  require(cfg.mesh.L >= 1, "mesh.L", "must be at least 1");
  const int q = cfg.mesh.quad_order;
  require(q == 2 || q == 3 || q == 4 || q == 6, "mesh.quad_order", "expected one of 2, 3, 4, 6");

  if (root.contains("sweep")) {
    const json& j = root.at("sweep");
    reject_unknown(j, "sweep", {"K", "m", "probe_k"});
    cfg.sweep.K = get_int(j, "sweep", "K", cfg.sweep.K);
    cfg.sweep.m = get_int(j, "sweep", "m", cfg.sweep.m);
    cfg.sweep.probe_k = get_numbers(j, "sweep", "probe_k", cfg.sweep.probe_k);
  }
  require(cfg.sweep.K >= 2, "sweep.K", "must be at least 2");
  require(cfg.sweep.m >= 1, "sweep.m", "must be at least 1");
  for (double k : cfg.sweep.probe_k) {
    require(k >= 0.0 && k <= 2.0 * M_PI, "sweep.probe_k", "entries must lie in [0, 2 pi]");
  }

  if (root.contains("solver")) {
    const json& j = root.at("solver");
    reject_unknown(j, "solver", {"tol", "max_iter", "seed", "block", "subspace"});
    cfg.solver.tol = get_number(j, "solver", "tol", cfg.solver.tol);
    cfg.solver.max_iter = get_int(j, "solver", "max_iter", cfg.solver.max_iter);
    if (j.contains("seed")) {
      require(j.at("seed").is_number_unsigned(), "solver.seed", "expected a non-negative integer");
      cfg.solver.seed = j.at("seed").get<std::uint64_t>();
    }
    cfg.solver.block = get_int(j, "solver", "block", cfg.solver.block);
    cfg.solver.subspace = get_int(j, "solver", "subspace", cfg.solver.subspace);
  }
  require(cfg.solver.tol > 0.0 && cfg.solver.tol < 1.0, "solver.tol", "must lie in (0, 1)");
  require(cfg.solver.max_iter >= 1, "solver.max_iter", "must be at least 1");
  require(cfg.solver.block >= 1, "solver.block", "must be at least 1");
  require(cfg.solver.subspace >= 0, "solver.subspace", "must be non-negative");
  cfg.solver.m = cfg.sweep.m;

  if (root.contains("classify")) {
    const json& j = root.at("classify");
    reject_unknown(j, "classify", {"theta_center", "theta_boundary", "theta_gap", "window"});
    cfg.classify.theta_center = get_number(j, "classify", "theta_center", cfg.classify.theta_center);
    cfg.classify.theta_boundary = get_number(j, "classify", "theta_boundary", cfg.classify.theta_boundary);
    cfg.classify.theta_gap = get_number(j, "classify", "theta_gap", cfg.classify.theta_gap);
    cfg.classify.window = get_number(j, "classify", "window", cfg.classify.window);
  }
  require(cfg.classify.theta_center > 0.0 && cfg.classify.theta_center <= 1.0,
          "classify.theta_center", "must lie in (0, 1]");
  require(cfg.classify.theta_boundary > 0.0 && cfg.classify.theta_boundary <= 1.0,
          "classify.theta_boundary", "must lie in (0, 1]");
  require(cfg.classify.theta_gap >= 0.0, "classify.theta_gap", "must be non-negative");
  require(cfg.classify.window >= 0.0, "classify.window", "must be non-negative");

  if (root.contains("convergence")) {
    const json& j = root.at("convergence");
    reject_unknown(j, "convergence", {"N_list", "k_par", "bands"});
    if (j.contains("N_list")) {
      cfg.convergence.N_list.clear();
      for (double v : get_numbers(j, "convergence", "N_list", {})) {
        require(v == std::floor(v), "convergence.N_list", "entries must be integers");
        cfg.convergence.N_list.push_back(static_cast<int>(v));
      }
    }
    cfg.convergence.k_par = get_number(j, "convergence", "k_par", cfg.convergence.k_par);
    cfg.convergence.bands = get_int(j, "convergence", "bands", cfg.convergence.bands);
  }
  require(cfg.convergence.bands >= 1, "convergence.bands", "must be at least 1");
  try {
    check_nested(cfg.convergence.N_list);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("convergence.N_list: ") + e.what());
  }

  if (root.contains("output")) {
    const json& j = root.at("output");
    reject_unknown(j, "output", {"directory", "formats"});
    cfg.output.directory = get_string(j, "output", "directory", cfg.output.directory);
    if (j.contains("formats")) {
      require(j.at("formats").is_array(), "output.formats", "expected an array of strings");
      for (const auto& f : j.at("formats")) {
        require(f.is_string(), "output.formats", "expected an array of strings");
        const std::string s = f.get<std::string>();
        if (s == "csv") continue;
        if (s == "mesh") cfg.output.write_mesh = true;
        else if (s == "matrices") cfg.output.write_matrices = true;
        else throw ConfigError("output.formats: unknown format '" + s + "' (csv, mesh, matrices)");
      }
    }
  }
  return cfg;
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("parse error: ") + e.what());
  }
  return from_json(root);
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_config(ss.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

SweepOptions sweep_options(const RunConfig& cfg, int threads) {
  SweepOptions o;
  o.N = cfg.mesh.N;
  o.L = cfg.mesh.L;
  o.diagonal = cfg.mesh.diagonal;
  o.quad_order = cfg.mesh.quad_order;
  o.K = cfg.sweep.K;
  o.probes = cfg.sweep.probe_k;
  o.solver = cfg.solver;
  o.solver.m = cfg.sweep.m;
  o.classify = cfg.classify;
  o.threads = threads;
  return o;
}

StudyOptions study_options(const RunConfig& cfg) {
  StudyOptions o;
  o.N_list = cfg.convergence.N_list;
  o.L = cfg.mesh.L;
  o.k_par = cfg.convergence.k_par;
  o.bands = cfg.convergence.bands;
  o.diagonal = cfg.mesh.diagonal;
  o.quad_order = cfg.mesh.quad_order;
  o.solver = cfg.solver;
  o.solver.m = cfg.convergence.bands;
  return o;
}

}  // namespace edgerec
