#include "edgerec/lattice.hpp"

#include <cmath>

namespace edgerec {

LatticeBasis make_honeycomb_basis() {
  const double s3 = std::numbers::sqrt3;
  const double pi = std::numbers::pi;
  LatticeBasis b;
  b.v1 = Vec2(s3 / 2.0, 0.5);
  b.v2 = Vec2(s3 / 2.0, -0.5);
  b.k1 = (4.0 * pi / s3) * Vec2(0.5, s3 / 2.0);
  b.k2 = (4.0 * pi / s3) * Vec2(0.5, -s3 / 2.0);
  b.k3 = -(b.k1 + b.k2);
  b.K = (b.k1 - b.k2) / 3.0;
  b.Kp = -b.K;
  return b;
}

LatticeCoords to_lattice_coords(const LatticeBasis& basis, const Vec2& x) {
  const double two_pi = 2.0 * std::numbers::pi;
  return {basis.k1.dot(x) / two_pi, basis.k2.dot(x) / two_pi};
}

Vec2 from_lattice_coords(const LatticeBasis& basis, const LatticeCoords& tau) {
  return tau.tau1 * basis.v1 + tau.tau2 * basis.v2;
}

Mat2 rotation_matrix() {
  const double s3 = std::numbers::sqrt3;
  Mat2 r;
  r << -0.5, s3 / 2.0, -s3 / 2.0, -0.5;
  return r;
}

}  // namespace edgerec
