#include "edgerec/convergence.hpp"

#include <cmath>
#include <complex>
#include <optional>

#include "edgerec/spectrum.hpp"

namespace edgerec {

namespace {

struct MeshSolution {
  Discretization disc;
  Eigen::VectorXd e_fem;
  Eigen::VectorXd e_recovered;
  std::vector<ModeField> modes;
};

MeshSolution solve_mesh(const DomainWallSpec& spec, int N, const StudyOptions& opts) {
  MeshSolution s{build_discretization(spec, N, opts.L, opts.diagonal, opts.quad_order), {}, {}, {}};
  EigenOptions eo = opts.solver;
  eo.m = opts.bands;
  const KSolution ks = solve_at_k(s.disc, opts.k_par, eo, true);
  if (!ks.ok()) throw EigenSolverError(ks.error);
  s.e_fem = ks.e_fem;
  s.e_recovered = ks.e_recovered;
  for (int b = 0; b < opts.bands; ++b) {
    s.modes.push_back(make_mode_field(s.disc, ks.vectors->col(b), opts.k_par, b + 1, ks.e_fem(b)));
  }
  return s;
}

// Value of a periodic-node field at a point, through its P1 representation.
cplx evaluate(const Discretization& d, const CVec& field, const PointLocation& loc) {
  cplx v = 0.0;
  const Triangle& t = d.mesh.triangles[loc.triangle];
  for (int a = 0; a < 3; ++a) v += loc.bary[a] * field(d.map.node_to_periodic[t[a]]);
  return v;
}

// || G p_coarse - G p_fine ||_0 on the fine mesh, after aligning the coarse
// phase with the fine one at the common node of largest fine modulus.
double gradient_difference(const Discretization& coarse, const ModeField& mc,
                           const Discretization& fine, const ModeField& mf) {
  const int np = fine.map.n_periodic();
  const int ratio = fine.mesh.N / coarse.mesh.N;
  std::vector<PointLocation> where(np);
  int anchor = -1;
  double best = -1.0;
  for (int p = 0; p < np; ++p) {
    const MeshNode& node = fine.mesh.nodes[fine.map.periodic_to_node[p]];
    where[p] = locate(coarse.mesh, node.tau1, node.tau2);
    if (node.i % ratio == 0 && node.j % ratio == 0 && std::abs(mf.nodal(p)) > best) {
      best = std::abs(mf.nodal(p));
      anchor = p;
    }
  }
  const cplx vf = mf.nodal(anchor);
  const cplx vc = evaluate(coarse, mc.nodal, where[anchor]);
  cplx phase = 1.0;
  if (std::abs(vc) > 0.0 && std::abs(vf) > 0.0) phase = (vf / std::abs(vf)) / (vc / std::abs(vc));

  CVec dx(np), dy(np);
  for (int p = 0; p < np; ++p) {
    dx(p) = phase * evaluate(coarse, mc.gradient.ux, where[p]) - mf.gradient.ux(p);
    dy(p) = phase * evaluate(coarse, mc.gradient.uy, where[p]) - mf.gradient.uy(p);
  }
  const auto& M = fine.matrices.M_periodic;
  const double sq = (dx.adjoint() * (M * dx))(0).real() + (dy.adjoint() * (M * dy))(0).real();
  return std::sqrt(std::max(0.0, sq));
}

}  // namespace

void check_nested(const std::vector<int>& N_list) {
  if (N_list.size() < 2) {
    throw ConvergenceError("refinement study needs at least two meshes");
  }
  for (size_t i = 0; i < N_list.size(); ++i) {
    if (N_list[i] < 2) throw ConvergenceError("mesh sizes must be at least 2");
    if (i > 0 && N_list[i] != 2 * N_list[i - 1]) {
      throw ConvergenceError("mesh sizes must double: " + std::to_string(N_list[i - 1]) +
                             " -> " + std::to_string(N_list[i]));
    }
  }
}

double fit_slope(const std::vector<double>& h, const std::vector<double>& err) {
  if (h.size() != err.size() || h.size() < 2) {
    throw ConvergenceError("slope fit needs at least two points");
  }
  const double n = static_cast<double>(h.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < h.size(); ++i) {
    const double x = std::log(h[i]);
    const double y = std::log(err[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

ConvergenceReport run_study(const DomainWallSpec& spec, const StudyOptions& opts) {
  check_nested(opts.N_list);
  if (opts.bands < 1) throw ConvergenceError("need at least one band");

  ConvergenceReport rep;
  rep.N_list = opts.N_list;
  std::optional<MeshSolution> prev;
  for (int N : opts.N_list) {
    MeshSolution cur = solve_mesh(spec, N, opts);
    rep.e_fem.push_back(cur.e_fem);
    rep.e_recovered.push_back(cur.e_recovered);
    if (prev) {
      PairErrors pe;
      pe.N_coarse = prev->disc.mesh.N;
      pe.N_fine = N;
      pe.err_fem.resize(opts.bands);
      pe.err_recovered.resize(opts.bands);
      pe.de_gradient.resize(opts.bands);
      for (int b = 0; b < opts.bands; ++b) {
        pe.err_fem(b) = std::abs(prev->e_fem(b) - cur.e_fem(b)) / std::abs(cur.e_fem(b));
        pe.err_recovered(b) =
            std::abs(prev->e_recovered(b) - cur.e_recovered(b)) / std::abs(cur.e_recovered(b));
        pe.de_gradient(b) = gradient_difference(prev->disc, prev->modes[b], cur.disc, cur.modes[b]);
      }
      rep.pairs.push_back(pe);
    }
    prev.emplace(std::move(cur));
  }

  if (rep.pairs.size() < 2) return rep;
  rep.slope_fem.resize(opts.bands);
  rep.slope_recovered.resize(opts.bands);
  rep.slope_gradient.resize(opts.bands);
  for (int b = 0; b < opts.bands; ++b) {
    std::vector<double> h, ef, er, eg;
    for (const auto& pe : rep.pairs) {
      h.push_back(1.0 / pe.N_coarse);
      ef.push_back(pe.err_fem(b));
      er.push_back(pe.err_recovered(b));
      eg.push_back(pe.de_gradient(b));
    }
    rep.slope_fem(b) = fit_slope(h, ef);
    rep.slope_recovered(b) = fit_slope(h, er);
    rep.slope_gradient(b) = fit_slope(h, eg);
  }
  return rep;
}

}  // namespace edgerec
