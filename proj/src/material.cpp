#include "edgerec/material.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace edgerec {

namespace {

const LatticeBasis& basis() {
  static const LatticeBasis b = make_honeycomb_basis();
  return b;
}

const Mat2& rot() {
  static const Mat2 r = rotation_matrix();
  return r;
}

double min_eig(const HermMat2& w) {
  Eigen::SelfAdjointEigenSolver<HermMat2> es(w, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

HermMat2 sigma2() {
  HermMat2 s;
  s << 0.0, cplx(0.0, -1.0), cplx(0.0, 1.0), 0.0;
  return s;
}

}  // namespace

double WallProfile::operator()(double zeta) const {
  if (name == "tanh") return eta_infinity * std::tanh(zeta);
  if (name == "erf") return eta_infinity * std::erf(zeta);
  if (name == "step") return zeta > 0 ? eta_infinity : (zeta < 0 ? -eta_infinity : 0.0);
  throw MaterialError("unknown wall profile '" + name + "'");
}

HermMat2 eval_bulk(const BulkSpec& spec, const Vec2& x) {
  const auto& b = basis();
  const Mat2& r = rot();
  const Mat2& c = spec.C;
  const Mat2 ct = c.transpose();
  const cplx e1 = std::polar(1.0, b.k1.dot(x));
  const cplx e2 = std::polar(1.0, b.k2.dot(x));
  const cplx e3 = std::polar(1.0, b.k3.dot(x));

  HermMat2 a = HermMat2::Identity() * spec.a0;
  a += c.cast<cplx>() * e1 + ct.cast<cplx>() * std::conj(e1);
  a += (r * c * r.transpose()).cast<cplx>() * e2 +
       (r * ct * r.transpose()).cast<cplx>() * std::conj(e2);
  a += (r.transpose() * c * r).cast<cplx>() * e3 +
       (r.transpose() * ct * r).cast<cplx>() * std::conj(e3);
  return a;
}

HermMat2 eval_perturbation(const PerturbationSpec& spec, const Vec2& x) {
  const auto& b = basis();
  const double p1 = b.k1.dot(x);
  const double p2 = b.k2.dot(x);
  const double p3 = b.k3.dot(x);
  switch (spec.kind) {
    case PerturbationKind::PBreaking:
      return HermMat2::Identity() * (std::sin(p1) + std::sin(p2) + std::sin(p3));
    case PerturbationKind::CBreaking:
      return sigma2() * (std::cos(p1) + std::cos(p2) + std::cos(p3));
    case PerturbationKind::CustomFourier: {
      HermMat2 sum = HermMat2::Zero();
      for (const auto& t : spec.terms) {
        sum += t.coeff * std::polar(1.0, t.m1 * p1 + t.m2 * p2);
      }
      return sum;
    }
  }
  return HermMat2::Zero();
}

HermMat2 eval_weight_unchecked(const DomainWallSpec& spec, const Vec2& x) {
  HermMat2 w = eval_bulk(spec.bulk, x);
  if (spec.delta != 0.0) {
    const double eta = spec.wall(spec.delta * basis().k2.dot(x));
    w += (spec.delta * eta) * eval_perturbation(spec.perturbation, x);
  }
  return w;
}

HermMat2 eval_weight(const DomainWallSpec& spec, const Vec2& x) {
  HermMat2 w = eval_weight_unchecked(spec, x);
  const double lo = min_eig(w);
  if (!(lo > 0.0)) {
    std::ostringstream os;
    os << "material weight is not positive definite at x = (" << x(0) << ", "
       << x(1) << "): min eigenvalue " << lo;
    throw MaterialError(os.str());
  }
  return w;
}

double min_weight_eigenvalue(const DomainWallSpec& spec, int grid,
                             double tau2_extent) {
  const auto& b = basis();
  double lo = std::numeric_limits<double>::infinity();
  const int rows = std::max(1, static_cast<int>(std::ceil(2.0 * tau2_extent))) * grid;
  for (int j = 0; j <= rows; ++j) {
    const double t2 = -tau2_extent + 2.0 * tau2_extent * j / rows;
    for (int i = 0; i < grid; ++i) {
      const double t1 = static_cast<double>(i) / grid;
      lo = std::min(lo, min_eig(eval_weight_unchecked(spec, t1 * b.v1 + t2 * b.v2)));
    }
  }
  return lo;
}

bool SymmetryReport::all_pass() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const auto& c) { return c.pass || c.advisory; });
}

std::string SymmetryReport::to_string() const {
  std::ostringstream os;
  for (const auto& c : checks) {
    os << (c.pass ? "PASS " : (c.advisory ? "WARN " : "FAIL ")) << c.name << ": " << c.value << '\n';
  }
  if (!bulk_real) os << "note: A complex/anisotropic (C not symmetric)\n";
  else if (!bulk_isotropic) os << "note: A anisotropic\n";
  return os.str();
}

SymmetryReport validate_symmetries(const DomainWallSpec& spec, int n_samples,
                                   unsigned seed) {
  if (n_samples < 1) throw MaterialError("n_samples must be >= 1");
  constexpr double tol = 1e-12;
  const auto& b = basis();
  const Mat2& r = rot();
  std::mt19937 gen(seed);
  std::uniform_real_distribution<double> unif(-3.0, 3.0);

  double herm = 0.0, period = 0.0, pc = 0.0, rinv = 0.0, anti_pc = 0.0;
  for (int s = 0; s < n_samples; ++s) {
    const Vec2 x(unif(gen), unif(gen));
    const HermMat2 a = eval_bulk(spec.bulk, x);
    const HermMat2 bb = eval_perturbation(spec.perturbation, x);
    herm = std::max({herm, (a - a.adjoint()).norm(), (bb - bb.adjoint()).norm()});
    for (int m = -2; m <= 2; ++m) {
      for (int n = -2; n <= 2; ++n) {
        const Vec2 shifted = x + m * b.v1 + n * b.v2;
        period = std::max(period, (eval_bulk(spec.bulk, shifted) - a).norm());
      }
    }
    pc = std::max(pc, (eval_bulk(spec.bulk, -x).conjugate() - a).norm());
    const Mat2 rt = r.transpose();
    const HermMat2 rotated = rt.cast<cplx>() * a * r.cast<cplx>();
    rinv = std::max(rinv, (eval_bulk(spec.bulk, rt * x) - rotated).norm());
    anti_pc = std::max(anti_pc,
                       (eval_perturbation(spec.perturbation, -x).conjugate() + bb).norm());
  }

  SymmetryReport rep;
  rep.checks.push_back({"hermitian", herm, herm < tol});
  rep.checks.push_back({"A periodicity", period, period < tol});
  rep.checks.push_back({"A PC-invariance", pc, pc < tol});
  rep.checks.push_back({"A R-invariance", rinv, rinv < tol});
  rep.checks.push_back({"B anti-PC", anti_pc, anti_pc < tol});

  double min_a = std::numeric_limits<double>::infinity();
  constexpr int grid = 64;
  for (int j = 0; j < grid; ++j) {
    for (int i = 0; i < grid; ++i) {
      const Vec2 x = (static_cast<double>(i) / grid) * b.v1 + (static_cast<double>(j) / grid) * b.v2;
      min_a = std::min(min_a, min_eig(eval_bulk(spec.bulk, x)));
    }
  }
  rep.checks.push_back({"A positive definite (min eig)", min_a, min_a > 0.0});

  // The wall saturates within a few cells; sample W across it.
  const double min_w = min_weight_eigenvalue(spec, grid, 3.0);
  rep.checks.push_back({"W positive definite (min eig)", min_w, min_w > 0.0, true});

  const Mat2& c = spec.bulk.C;
  rep.bulk_real = (c - c.transpose()).norm() < tol;
  rep.bulk_isotropic = std::abs(c(0, 1)) < tol && std::abs(c(1, 0)) < tol &&
                       std::abs(c(0, 0) - c(1, 1)) < tol;
  return rep;
}

}  // namespace edgerec
