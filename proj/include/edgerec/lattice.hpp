#pragma once

#include <array>
#include <numbers>

#include <Eigen/Dense>

namespace edgerec {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

/// Honeycomb lattice vectors and their duals, with k_i . v_j = 2 pi delta_ij.
///
/// The third dual vector is fixed as k3 = -(k1 + k2). This is the sign that
/// appears in the third exponent of the lowest-order honeycomb weight, and it
/// is the one used for sin(k3 . x) in the parity-breaking perturbation.
struct LatticeBasis {
  Vec2 v1;
  Vec2 v2;
  Vec2 k1;
  Vec2 k2;
  Vec2 k3;
  Vec2 K;   // (k1 - k2) / 3
  Vec2 Kp;  // -K
};

LatticeBasis make_honeycomb_basis();

/// Lattice coordinates (tau1, tau2) with x = tau1 v1 + tau2 v2.
struct LatticeCoords {
  double tau1 = 0.0;
  double tau2 = 0.0;
};

LatticeCoords to_lattice_coords(const LatticeBasis& basis, const Vec2& x);
Vec2 from_lattice_coords(const LatticeBasis& basis, const LatticeCoords& tau);

/// Clockwise rotation by 2 pi / 3.
Mat2 rotation_matrix();

}  // namespace edgerec
