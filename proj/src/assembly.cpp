#include "edgerec/assembly.hpp"

#include <cmath>
#include <numbers>
#include <ostream>

namespace edgerec {

ElementGeometry element_geometry(const CylinderMesh& mesh, const Triangle& t) {
  const Vec2& p0 = mesh.nodes[t[0]].x;
  const Vec2& p1 = mesh.nodes[t[1]].x;
  const Vec2& p2 = mesh.nodes[t[2]].x;
  Mat2 jac;
  jac.col(0) = p1 - p0;
  jac.col(1) = p2 - p0;
  const double det = jac.determinant();
  const Mat2 inv_t = jac.inverse().transpose();
  ElementGeometry g;
  g.area = 0.5 * std::abs(det);
  // reference gradients (-1,-1), (1,0), (0,1)
  g.grad[1] = inv_t.col(0);
  g.grad[2] = inv_t.col(1);
  g.grad[0] = -g.grad[1] - g.grad[2];
  return g;
}

WeightField sample_weight(const CylinderMesh& mesh, const DomainWallSpec& spec, int quad_order) {
  WeightField wf;
  wf.quad_order = quad_order;
  wf.rule = triangle_quadrature(quad_order);
  wf.geometry.reserve(mesh.triangles.size());
  wf.values.reserve(mesh.triangles.size() * wf.rule.size());
  for (const auto& t : mesh.triangles) {
    wf.geometry.push_back(element_geometry(mesh, t));
    for (const auto& q : wf.rule) {
      const Vec2 x = q.bary[0] * mesh.nodes[t[0]].x + q.bary[1] * mesh.nodes[t[1]].x +
                     q.bary[2] * mesh.nodes[t[2]].x;
      wf.values.push_back(eval_weight_unchecked(spec, x));
    }
  }
  return wf;
}

namespace {

SpMat hermitian_part(const SpMat& a) {
  SpMat ah = a.adjoint();
  SpMat h = a + ah;
  return h * cplx(0.5, 0.0);
}

}  // namespace

MatrixSet assemble(const CylinderMesh& mesh, const DofMap& map, const WeightField& weight) {
  using Trip = Eigen::Triplet<cplx>;
  const Eigen::Vector2cd k1 = make_honeycomb_basis().k1.cast<cplx>();
  std::vector<Trip> ta, tb, tc, tm;
  std::vector<Eigen::Triplet<double>> tp;
  const size_t est = mesh.triangles.size() * 9;
  ta.reserve(est);
  tb.reserve(est);
  tc.reserve(est);
  tm.reserve(est);
  tp.reserve(est);

  for (size_t e = 0; e < mesh.triangles.size(); ++e) {
    const Triangle& tri = mesh.triangles[e];
    const ElementGeometry& g = weight.geometry[e];
    Eigen::Matrix3cd la = Eigen::Matrix3cd::Zero();
    Eigen::Matrix3cd lb = Eigen::Matrix3cd::Zero();
    Eigen::Matrix3cd lc = Eigen::Matrix3cd::Zero();
    Eigen::Matrix3d lm = Eigen::Matrix3d::Zero();
    for (size_t q = 0; q < weight.rule.size(); ++q) {
      const auto& qp = weight.rule[q];
      const double w = qp.weight * g.area;
      const HermMat2& wq = weight.at(e, q);
      const cplx kwk = k1.dot(wq * k1);  // k1^T W k1 (k1 real)
      const Eigen::RowVector2cd k1w = k1.transpose() * wq;
      for (int b = 0; b < 3; ++b) {
        const Eigen::Vector2cd wgrad = wq * g.grad[b].cast<cplx>();
        const cplx kw_grad = k1w * g.grad[b].cast<cplx>();
        for (int a = 0; a < 3; ++a) {
          la(a, b) += w * g.grad[a].cast<cplx>().dot(wgrad);
          lb(a, b) += w * qp.bary[a] * kw_grad;
          lc(a, b) += w * qp.bary[a] * qp.bary[b] * kwk;
          lm(a, b) += w * qp.bary[a] * qp.bary[b];
        }
      }
    }
    for (int a = 0; a < 3; ++a) {
      const int pa = map.node_to_periodic[tri[a]];
      const int da = map.node_to_dof[tri[a]];
      for (int b = 0; b < 3; ++b) {
        const int pb = map.node_to_periodic[tri[b]];
        tp.emplace_back(pa, pb, lm(a, b));
        const int db = map.node_to_dof[tri[b]];
        if (da == DofMap::kEliminated || db == DofMap::kEliminated) continue;
        ta.emplace_back(da, db, la(a, b));
        tb.emplace_back(da, db, lb(a, b));
        tc.emplace_back(da, db, lc(a, b));
        tm.emplace_back(da, db, cplx(lm(a, b), 0.0));
      }
    }
  }

  const int n = map.n_dof();
  const int np = map.n_periodic();
  MatrixSet ms;
  ms.quad_order = weight.quad_order;
  SpMat a(n, n), c(n, n);
  ms.B_mixed.resize(n, n);
  ms.M_mass.resize(n, n);
  ms.M_periodic.resize(np, np);
  a.setFromTriplets(ta.begin(), ta.end());
  ms.B_mixed.setFromTriplets(tb.begin(), tb.end());
  c.setFromTriplets(tc.begin(), tc.end());
  ms.M_mass.setFromTriplets(tm.begin(), tm.end());
  ms.M_periodic.setFromTriplets(tp.begin(), tp.end());
  ms.A_stiff = hermitian_part(a);
  ms.C_mass_k1 = hermitian_part(c);
  ms.A_stiff.makeCompressed();
  ms.C_mass_k1.makeCompressed();

  for (int k = 0; k < ms.M_mass.outerSize(); ++k) {
    for (SpMat::InnerIterator it(ms.M_mass, k); it; ++it) {
      if (it.row() == it.col() && !(it.value().real() > 0.0)) {
        throw AssemblyError("mass matrix has a non-positive diagonal entry");
      }
    }
  }
  return ms;
}

MatrixSet assemble(const CylinderMesh& mesh, const DofMap& map, const DomainWallSpec& spec,
                   int quad_order) {
  if (quad_order < 2) throw std::invalid_argument("assembly needs quadrature order >= 2");
  return assemble(mesh, map, sample_weight(mesh, spec, quad_order));
}

BlochStiffness bloch_stiffness(const MatrixSet& ms, double k_par) {
  const double t = k_par / (2.0 * std::numbers::pi);
  SpMat g = ms.B_mixed * cplx(0.0, -t);
  SpMat gh = g.adjoint();
  SpMat mixed = g + gh;
  SpMat base = ms.A_stiff + ms.C_mass_k1 * cplx(t * t, 0.0);
  BlochStiffness out;
  out.k_par = k_par;
  out.S = base + mixed;
  out.S.makeCompressed();
  return out;
}

void write_matrix_coo(const SpMat& m, std::ostream& os) {
  os.precision(17);
  for (int k = 0; k < m.outerSize(); ++k) {
    for (SpMat::InnerIterator it(m, k); it; ++it) {
      os << it.row() << ' ' << it.col() << ' ' << it.value().real() << ' ' << it.value().imag()
         << '\n';
    }
  }
}

}  // namespace edgerec
