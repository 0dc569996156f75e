#pragma once

#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "edgerec/assembly.hpp"
#include "edgerec/mesh.hpp"

namespace edgerec {

/// Gradient at the patch center of the least-squares quadratic through the
/// patch values. Exact for values sampled from any quadratic polynomial.
Vec2 fit_local_quadratic(const NodePatch& patch, const Eigen::VectorXd& values);

/// Polynomial preserving recovery as two sparse differential matrices on
/// periodic nodes (Dirichlet rows included): gx = Gx u, gy = Gy u.
struct RecoveryOperator {
  SpMatReal Gx;
  SpMatReal Gy;
};

RecoveryOperator build_recovery(const CylinderMesh& mesh, const DofMap& map,
                                const std::vector<NodePatch>& patches);

struct RecoveredGradient {
  CVec ux;
  CVec uy;
};

/// u is a periodic-node vector (see zero_extend for dof vectors).
RecoveredGradient recover_gradient(const RecoveryOperator& op, const CVec& u);

/// Lift a dof vector to periodic nodes, with zeros on the Dirichlet rows.
CVec zero_extend(const DofMap& map, const CVec& dof_values);

}  // namespace edgerec
