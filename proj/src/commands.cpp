#include "edgerec/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace edgerec {

namespace fs = std::filesystem;

namespace {

std::ofstream open_out(const fs::path& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write '" + path.string() + "'");
  os.precision(17);
  return os;
}

// Solving commands refuse materials that fail a hard symmetry check.
void require_valid(const DomainWallSpec& spec) {
  const SymmetryReport rep = validate_symmetries(spec, 200);
  if (!rep.all_pass()) {
    throw MaterialError("material fails validation (run 'validate' for details):\n" +
                        rep.to_string());
  }
}

void write_disc_extras(const RunConfig& cfg, const Discretization& d, const fs::path& dir) {
  if (cfg.output.write_mesh) {
    auto nodes = open_out(dir / "mesh_nodes.csv");
    write_mesh_nodes_csv(d.mesh, nodes);
    auto tris = open_out(dir / "mesh_triangles.csv");
    write_mesh_triangles_csv(d.mesh, tris);
  }
  if (cfg.output.write_matrices) {
    const std::pair<const char*, const SpMat*> mats[] = {{"A", &d.matrices.A_stiff},
                                                         {"B", &d.matrices.B_mixed},
                                                         {"C", &d.matrices.C_mass_k1},
                                                         {"M", &d.matrices.M_mass}};
    for (const auto& [name, m] : mats) {
      auto os = open_out(dir / (std::string("matrix_") + name + ".coo"));
      write_matrix_coo(*m, os);
    }
  }
}

}  // namespace

void write_bands_csv(const BandStructure& bands, std::ostream& os) {
  os << "k_index,k_par,band,E_fem,E_recovered,center_fraction,boundary_fraction,class\n";
  char buf[128];
  for (size_t j = 0; j < bands.k_grid.size(); ++j) {
    const int p = bands.probe_of_k[j];
    const bool ok = bands.errors[j].empty();
    const bool classified = p >= 0 && ok && !bands.probes[p].localization.empty();
    for (int b = 0; b < bands.bands(); ++b) {
      std::snprintf(buf, sizeof buf, "%zu,%.17g,%d,", j, bands.k_grid[j], b + 1);
      os << buf;
      if (ok) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g", bands.e_fem(j, b), bands.e_recovered(j, b));
        os << buf;
      } else {
        os << ',';
      }
      os << ',';
      if (classified) {
        const auto& pr = bands.probes[p];
        std::snprintf(buf, sizeof buf, "%.6f,%.6f,", pr.localization[b].center_fraction,
                      pr.localization[b].boundary_fraction);
        os << buf << to_string(pr.classes[b]);
      } else {
        os << ",,";
      }
      os << '\n';
    }
  }
}

void write_mode_csv(const Discretization& d, const ModeField& mode, std::ostream& os) {
  os << "tau1,tau2,x,y,re,im,abs\n";
  char buf[256];
  for (int j = 0; j < d.mesh.ny(); ++j) {
    for (int i = 0; i < d.mesh.nx(); ++i) {
      const MeshNode& n = d.mesh.nodes[d.mesh.node_index(i, j)];
      const cplx v = mode.nodal(d.map.node_to_periodic[d.mesh.node_index(i, j)]);
      std::snprintf(buf, sizeof buf, "%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g\n", n.tau1, n.tau2,
                    n.x[0], n.x[1], v.real(), v.imag(), std::abs(v));
      os << buf;
    }
  }
}

void write_convergence_csv(const ConvergenceReport& rep, std::ostream& os) {
  os << "pair,N_coarse,N_fine,band,err_fem,err_recovered,de_gradient\n";
  char buf[256];
  for (size_t p = 0; p < rep.pairs.size(); ++p) {
    const auto& pe = rep.pairs[p];
    for (Eigen::Index b = 0; b < pe.err_fem.size(); ++b) {
      std::snprintf(buf, sizeof buf, "%zu,%d,%d,%ld,%.10e,%.10e,%.10e\n", p, pe.N_coarse,
                    pe.N_fine, static_cast<long>(b + 1), pe.err_fem(b), pe.err_recovered(b),
                    pe.de_gradient(b));
      os << buf;
    }
  }
}

void write_slopes_csv(const ConvergenceReport& rep, std::ostream& os) {
  os << "band,quantity,slope\n";
  char buf[128];
  for (Eigen::Index b = 0; b < rep.slope_fem.size(); ++b) {
    const std::pair<const char*, double> rows[] = {{"fem", rep.slope_fem(b)},
                                                   {"recovered", rep.slope_recovered(b)},
                                                   {"gradient", rep.slope_gradient(b)}};
    for (const auto& [name, value] : rows) {
      std::snprintf(buf, sizeof buf, "%ld,%s,%.6f\n", static_cast<long>(b + 1), name, value);
      os << buf;
    }
  }
}

std::string mode_file_name(double k_par, int band) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "mode_k%.4f_b%d.csv", k_par, band);
  return buf;
}

BandsOutcome cmd_bands(const RunConfig& cfg, const fs::path& out_dir, int threads) {
  require_valid(cfg.material);
  fs::create_directories(out_dir);
  const Discretization d = build_discretization(cfg.material, cfg.mesh.N, cfg.mesh.L,
                                                cfg.mesh.diagonal, cfg.mesh.quad_order);
  write_disc_extras(cfg, d, out_dir);
  BandsOutcome out;
  out.result = sweep(d, sweep_options(cfg, threads));
  for (const auto& e : out.result.bands.errors) out.failed_k += e.empty() ? 0 : 1;
  out.file = out_dir / "bands.csv";
  auto os = open_out(out.file);
  write_bands_csv(out.result.bands, os);
  return out;
}

std::vector<fs::path> cmd_modes(const RunConfig& cfg, double k_par, const std::vector<int>& bands,
                                const fs::path& out_dir) {
  if (bands.empty()) throw std::invalid_argument("no bands requested");
  require_valid(cfg.material);
  const Discretization d = build_discretization(cfg.material, cfg.mesh.N, cfg.mesh.L,
                                                cfg.mesh.diagonal, cfg.mesh.quad_order);
  const int top = *std::max_element(bands.begin(), bands.end());
  for (int b : bands) {
    if (b < 1 || b > d.map.n_dof()) {
      throw std::out_of_range("band index " + std::to_string(b) + " out of range [1, " +
                              std::to_string(d.map.n_dof()) + "]");
    }
  }
  fs::create_directories(out_dir);
  write_disc_extras(cfg, d, out_dir);
  EigenOptions eo = cfg.solver;
  eo.m = std::max(cfg.sweep.m, top);
  const KSolution ks = solve_at_k(d, k_par, eo, true);
  if (!ks.ok()) throw EigenSolverError(ks.error);
  std::vector<fs::path> files;
  for (int b : bands) {
    const ModeField f = make_mode_field(d, ks.vectors->col(b - 1), k_par, b, ks.e_fem(b - 1));
    files.push_back(out_dir / mode_file_name(k_par, b));
    auto os = open_out(files.back());
    write_mode_csv(d, f, os);
  }
  return files;
}

ConvergenceReport cmd_converge(const RunConfig& cfg, const std::vector<int>& N_list,
                               const fs::path& out_dir) {
  require_valid(cfg.material);
  StudyOptions opts = study_options(cfg);
  if (!N_list.empty()) opts.N_list = N_list;
  ConvergenceReport rep = run_study(cfg.material, opts);
  fs::create_directories(out_dir);
  auto conv = open_out(out_dir / "convergence.csv");
  write_convergence_csv(rep, conv);
  if (rep.slope_fem.size() > 0) {
    auto slopes = open_out(out_dir / "slopes.csv");
    write_slopes_csv(rep, slopes);
  }
  return rep;
}

bool cmd_validate(const RunConfig& cfg, std::ostream& os) {
  const SymmetryReport rep = validate_symmetries(cfg.material, 200);
  os << rep.to_string();
  return rep.all_pass();
}

}  // namespace edgerec
