#pragma once

#include <complex>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "edgerec/lattice.hpp"

namespace edgerec {

using cplx = std::complex<double>;
using HermMat2 = Eigen::Matrix2cd;

/// Constant part plus lowest Fourier coefficient of a honeycomb weight A(x).
struct BulkSpec {
  double a0 = 1.0;
  Mat2 C = Mat2::Zero();
};

enum class PerturbationKind { PBreaking, CBreaking, CustomFourier };

/// One Fourier mode of a custom perturbation: coeff * exp(i (m1 k1 + m2 k2) . x).
struct FourierTerm {
  int m1 = 0;
  int m2 = 0;
  HermMat2 coeff = HermMat2::Zero();
};

struct PerturbationSpec {
  PerturbationKind kind = PerturbationKind::PBreaking;
  std::vector<FourierTerm> terms;  // CustomFourier only
};

/// Bounded real wall profile eta with eta(+-inf) = +-eta_infinity.
struct WallProfile {
  std::string name = "tanh";
  double eta_infinity = 1.0;

  double operator()(double zeta) const;
};

/// W(x) = A(x) + delta * eta(delta * k2 . x) * B(x).
struct DomainWallSpec {
  BulkSpec bulk;
  PerturbationSpec perturbation;
  double delta = 0.0;
  WallProfile wall;
};

HermMat2 eval_bulk(const BulkSpec& spec, const Vec2& x);
HermMat2 eval_perturbation(const PerturbationSpec& spec, const Vec2& x);

/// Throws MaterialError if the value is not positive definite.
HermMat2 eval_weight(const DomainWallSpec& spec, const Vec2& x);

/// Same as eval_weight without the definiteness check; used in hot loops
/// once a spec has been validated.
HermMat2 eval_weight_unchecked(const DomainWallSpec& spec, const Vec2& x);

struct MaterialError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SymmetryCheck {
  std::string name;
  double value = 0.0;  // max violation, or min eigenvalue for definiteness
  bool pass = false;
  bool advisory = false;  // reported but does not fail the report
};

struct SymmetryReport {
  std::vector<SymmetryCheck> checks;
  bool bulk_real = false;       // C symmetric gives a real A(x)
  bool bulk_isotropic = false;  // C proportional to I
  bool all_pass() const;
  std::string to_string() const;
};

/// Spot-checks the honeycomb conditions on A and the anti-PC condition on B
/// at random points, plus definiteness of A on a 64x64 grid of the unit cell.
/// Definiteness of the full weight W across the wall is reported as an
/// advisory check: the sigma_2 perturbations at delta = 1 are indefinite near
/// the lattice points.
SymmetryReport validate_symmetries(const DomainWallSpec& spec, int n_samples,
                                   unsigned seed = 12345);

/// Minimum eigenvalue of W over a grid covering one period along v1 and the
/// transverse window tau2 in [-tau2_extent, tau2_extent].
double min_weight_eigenvalue(const DomainWallSpec& spec, int grid,
                             double tau2_extent);

}  // namespace edgerec
