#include "edgerec/spectrum.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numbers>
#include <thread>

namespace edgerec {

Discretization build_discretization(const DomainWallSpec& spec, int N, int L, Diagonal diagonal,
                                    int quad_order) {
  Discretization d;
  d.mesh = build_mesh(N, L, diagonal);
  d.map = build_dof_map(d.mesh);
  d.patches = build_patches(d.mesh, d.map);
  d.recovery = build_recovery(d.mesh, d.map, d.patches);
  d.weight = sample_weight(d.mesh, spec, quad_order);
  d.matrices = assemble(d.mesh, d.map, d.weight);
  d.lumped_mass = d.matrices.M_periodic * Eigen::VectorXd::Ones(d.map.n_periodic());
  return d;
}

double correction_norm(const CylinderMesh& mesh, const DofMap& map, const WeightField& weight,
                       const CVec& u, const RecoveredGradient& grad) {
  double total = 0.0;
  for (size_t e = 0; e < mesh.triangles.size(); ++e) {
    const Triangle& t = mesh.triangles[e];
    const ElementGeometry& g = weight.geometry[e];
    std::array<int, 3> pid{};
    Eigen::Vector2cd grad_ph = Eigen::Vector2cd::Zero();
    for (int a = 0; a < 3; ++a) {
      pid[a] = map.node_to_periodic[t[a]];
      grad_ph += u(pid[a]) * g.grad[a].cast<cplx>();
    }
    double local = 0.0;
    for (size_t q = 0; q < weight.rule.size(); ++q) {
      const auto& qp = weight.rule[q];
      Eigen::Vector2cd rec = Eigen::Vector2cd::Zero();
      for (int a = 0; a < 3; ++a) {
        rec(0) += qp.bary[a] * grad.ux(pid[a]);
        rec(1) += qp.bary[a] * grad.uy(pid[a]);
      }
      const Eigen::Vector2cd err = grad_ph - rec;
      local += qp.weight * err.dot(weight.at(e, q) * err).real();
    }
    total += local * g.area;
  }
  return total;
}

double recovered_eigenvalue(double e_fem, double corr) { return e_fem - corr; }

ModeField make_mode_field(const Discretization& d, const CVec& dofs, double k_par, int band,
                          double e_fem) {
  ModeField f;
  f.k_par = k_par;
  f.band = band;
  f.e_fem = e_fem;
  f.dofs = dofs;
  f.nodal = zero_extend(d.map, dofs);
  f.gradient = recover_gradient(d.recovery, f.nodal);
  f.e_recovered = recovered_eigenvalue(
      e_fem, correction_norm(d.mesh, d.map, d.weight, f.nodal, f.gradient));
  return f;
}

Localization localization_profile(const Discretization& d, const CVec& nodal) {
  const double L = d.mesh.L;
  double total = 0.0, center = 0.0, boundary = 0.0;
  for (int p = 0; p < d.map.n_periodic(); ++p) {
    const double w = d.lumped_mass(p) * std::norm(nodal(p));
    const double t2 = std::abs(d.mesh.nodes[d.map.periodic_to_node[p]].tau2);
    total += w;
    if (t2 < L / 3.0) center += w;
    if (t2 > 2.0 * L / 3.0) boundary += w;
  }
  Localization loc;
  if (total > 0.0) {
    loc.center_fraction = center / total;
    loc.boundary_fraction = boundary / total;
  }
  return loc;
}

std::vector<double> modulus_grid(const Discretization& d, const CVec& nodal) {
  std::vector<double> out(d.mesh.nodes.size());
  for (size_t k = 0; k < d.mesh.nodes.size(); ++k) {
    out[k] = std::abs(nodal(d.map.node_to_periodic[k]));
  }
  return out;
}

const char* to_string(BandClass c) {
  switch (c) {
    case BandClass::Bulk: return "bulk";
    case BandClass::Edge: return "edge";
    case BandClass::PseudoEdge: return "pseudo-edge";
    case BandClass::Unclassified: return "unclassified";
  }
  return "?";
}

KSolution solve_at_k(const Discretization& d, double k_par, const EigenOptions& opts,
                     bool keep_vectors) {
  KSolution out;
  out.k_par = k_par;
  try {
    const BlochStiffness s = bloch_stiffness(d.matrices, k_par);
    const EigenResult er = solve_gevp(s.S, d.matrices.M_mass, opts);
    const Eigen::Index m = er.eigenvalues.size();
    out.e_fem = er.eigenvalues;
    out.residuals = er.residuals;
    out.correction.resize(m);
    out.e_recovered.resize(m);
    for (Eigen::Index i = 0; i < m; ++i) {
      const CVec nodal = zero_extend(d.map, er.eigenvectors.col(i));
      const RecoveredGradient g = recover_gradient(d.recovery, nodal);
      out.correction(i) = correction_norm(d.mesh, d.map, d.weight, nodal, g);
      out.e_recovered(i) = recovered_eigenvalue(out.e_fem(i), out.correction(i));
    }
    if (keep_vectors) out.vectors = er.eigenvectors;
  } catch (const std::exception& ex) {
    out.error = ex.what();
  }
  return out;
}

std::vector<double> merged_k_grid(int K, const std::vector<double>& probes,
                                  std::vector<int>& probe_of_k) {
  if (K < 2) throw std::invalid_argument("sweep needs K >= 2");
  const double two_pi = 2.0 * std::numbers::pi;
  std::vector<double> ks;
  for (int j = 0; j < K; ++j) ks.push_back(two_pi * j / (K - 1));
  for (double p : probes) {
    if (p < 0.0 || p > two_pi) throw std::invalid_argument("probe momentum outside [0, 2 pi]");
    const bool on_grid = std::any_of(ks.begin(), ks.end(),
                                     [&](double k) { return std::abs(k - p) < 1e-12; });
    if (!on_grid) ks.push_back(p);
  }
  std::sort(ks.begin(), ks.end());
  probe_of_k.assign(ks.size(), -1);
  for (size_t pi = 0; pi < probes.size(); ++pi) {
    for (size_t j = 0; j < ks.size(); ++j) {
      if (std::abs(ks[j] - probes[pi]) < 1e-12 && probe_of_k[j] < 0) {
        probe_of_k[j] = static_cast<int>(pi);
        break;
      }
    }
  }
  return ks;
}

ProbeResult classify_bands(const BandStructure& bands, int probe_k_index,
                           const std::vector<Localization>& fields, const ClassifyOptions& opts) {
  const int m = bands.bands();
  ProbeResult pr;
  pr.k_index = probe_k_index;
  pr.k_par = bands.k_grid[probe_k_index];
  pr.localization = fields;
  pr.classes.assign(m, BandClass::Unclassified);
  pr.min_gap.assign(m, std::numeric_limits<double>::quiet_NaN());

  std::vector<int> window;
  for (size_t j = 0; j < bands.k_grid.size(); ++j) {
    if (std::abs(bands.k_grid[j] - pr.k_par) <= opts.window + 1e-12 &&
        bands.errors[j].empty()) {
      window.push_back(static_cast<int>(j));
    }
  }
  if (window.empty() || m < 2 || static_cast<int>(fields.size()) != m) return pr;

  double spacing = 0.0;
  for (int j : window) {
    spacing += (bands.e_recovered(j, m - 1) - bands.e_recovered(j, 0)) / (m - 1);
  }
  pr.mean_spacing = spacing / static_cast<double>(window.size());

  for (int b = 0; b < m; ++b) {
    double gap = std::numeric_limits<double>::infinity();
    for (int j : window) {
      const auto row = bands.e_recovered.row(j);
      if (b > 0) gap = std::min(gap, row(b) - row(b - 1));
      if (b + 1 < m) gap = std::min(gap, row(b + 1) - row(b));
    }
    pr.min_gap[b] = gap;
    const bool isolated = gap > opts.theta_gap * pr.mean_spacing;
    const bool center = fields[b].center_fraction > opts.theta_center;
    const bool boundary = fields[b].boundary_fraction > opts.theta_boundary;
    if (isolated && center) pr.classes[b] = BandClass::Edge;
    else if (isolated && boundary) pr.classes[b] = BandClass::PseudoEdge;
    else if (isolated || center || boundary) pr.classes[b] = BandClass::Unclassified;
    else pr.classes[b] = BandClass::Bulk;
  }
  return pr;
}

namespace {

template <typename Fn>
void parallel_for(int count, int threads, Fn&& fn) {
  threads = std::max(1, std::min(threads, count));
  if (threads == 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (int i = next++; i < count; i = next++) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace

SweepResult sweep(const DomainWallSpec& spec, const SweepOptions& opts) {
  const Discretization d = build_discretization(spec, opts.N, opts.L, opts.diagonal, opts.quad_order);
  return sweep(d, opts);
}

SweepResult sweep(const Discretization& d, const SweepOptions& opts) {
  SweepResult out;
  BandStructure& bs = out.bands;
  bs.k_grid = merged_k_grid(opts.K, opts.probes, bs.probe_of_k);
  const int nk = static_cast<int>(bs.k_grid.size());
  const int m = opts.solver.m;
  bs.e_fem = Eigen::MatrixXd::Constant(nk, m, std::numeric_limits<double>::quiet_NaN());
  bs.e_recovered = bs.e_fem;
  bs.errors.assign(nk, std::string());

  std::vector<KSolution> sols(nk);
  parallel_for(nk, opts.threads, [&](int j) {
    sols[j] = solve_at_k(d, bs.k_grid[j], opts.solver, bs.probe_of_k[j] >= 0);
  });

  for (int j = 0; j < nk; ++j) {
    if (!sols[j].ok()) {
      bs.errors[j] = sols[j].error;
      continue;
    }
    bs.e_fem.row(j) = sols[j].e_fem.transpose();
    bs.e_recovered.row(j) = sols[j].e_recovered.transpose();
  }

  out.probe_fields.resize(opts.probes.size());
  bs.probes.resize(opts.probes.size());
  for (int j = 0; j < nk; ++j) {
    const int p = bs.probe_of_k[j];
    if (p < 0) continue;
    std::vector<Localization> loc(m);
    if (sols[j].ok()) {
      for (int b = 0; b < m; ++b) {
        ModeField f;
        f.k_par = bs.k_grid[j];
        f.band = b + 1;
        f.e_fem = sols[j].e_fem(b);
        f.e_recovered = sols[j].e_recovered(b);
        f.dofs = sols[j].vectors->col(b);
        f.nodal = zero_extend(d.map, f.dofs);
        f.gradient = recover_gradient(d.recovery, f.nodal);
        loc[b] = localization_profile(d, f.nodal);
        out.probe_fields[p].push_back(std::move(f));
      }
      bs.probes[p] = classify_bands(bs, j, loc, opts.classify);
    } else {
      bs.probes[p].k_par = bs.k_grid[j];
      bs.probes[p].k_index = j;
      bs.probes[p].classes.assign(m, BandClass::Unclassified);
    }
  }
  return out;
}

}  // namespace edgerec
