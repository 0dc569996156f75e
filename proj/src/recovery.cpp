#include "edgerec/recovery.hpp"

#include <stdexcept>
#include <string>

namespace edgerec {

namespace {

// Rows 1 and 2 of (V^T V)^{-1} V^T: the linear coefficients of the fit.
Eigen::Matrix<double, 2, Eigen::Dynamic> gradient_stencil(const NodePatch& patch) {
  const auto v = patch_vandermonde(patch);
  const Eigen::Matrix<double, 6, 6> normal = v.transpose() * v;
  Eigen::LLT<Eigen::Matrix<double, 6, 6>> llt(normal);
  if (llt.info() != Eigen::Success) {
    throw std::runtime_error("rank-deficient recovery patch at periodic node " +
                             std::to_string(patch.center));
  }
  const Eigen::Matrix<double, 6, Eigen::Dynamic> coeff = llt.solve(v.transpose());
  return coeff.middleRows<2>(1) / patch.scale;
}

}  // namespace

Vec2 fit_local_quadratic(const NodePatch& patch, const Eigen::VectorXd& values) {
  if (values.size() != static_cast<Eigen::Index>(patch.members.size())) {
    throw std::invalid_argument("fit_local_quadratic: value count does not match patch size");
  }
  return gradient_stencil(patch) * values;
}

RecoveryOperator build_recovery(const CylinderMesh& mesh, const DofMap& map,
                                const std::vector<NodePatch>& patches) {
  (void)mesh;
  const int np = map.n_periodic();
  if (static_cast<int>(patches.size()) != np) {
    throw std::invalid_argument("build_recovery: one patch per periodic node expected");
  }
  std::vector<Eigen::Triplet<double>> tx, ty;
  for (const auto& p : patches) {
    const auto st = gradient_stencil(p);
    for (size_t k = 0; k < p.members.size(); ++k) {
      tx.emplace_back(p.center, p.members[k], st(0, static_cast<Eigen::Index>(k)));
      ty.emplace_back(p.center, p.members[k], st(1, static_cast<Eigen::Index>(k)));
    }
  }
  RecoveryOperator op;
  op.Gx.resize(np, np);
  op.Gy.resize(np, np);
  op.Gx.setFromTriplets(tx.begin(), tx.end());
  op.Gy.setFromTriplets(ty.begin(), ty.end());
  return op;
}

RecoveredGradient recover_gradient(const RecoveryOperator& op, const CVec& u) {
  if (u.size() != op.Gx.cols()) {
    throw std::invalid_argument("recover_gradient: vector length " + std::to_string(u.size()) +
                                " does not match operator size " + std::to_string(op.Gx.cols()));
  }
  RecoveredGradient g;
  g.ux = op.Gx.cast<cplx>() * u;
  g.uy = op.Gy.cast<cplx>() * u;
  return g;
}

CVec zero_extend(const DofMap& map, const CVec& dof_values) {
  if (dof_values.size() != map.n_dof()) {
    throw std::invalid_argument("zero_extend: expected a dof vector");
  }
  CVec out = CVec::Zero(map.n_periodic());
  for (int p = 0; p < map.n_periodic(); ++p) {
    const int d = map.periodic_to_dof[p];
    if (d != DofMap::kEliminated) out(p) = dof_values(d);
  }
  return out;
}

}  // namespace edgerec
