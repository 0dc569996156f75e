#include "edgerec/eigensolver.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include <Eigen/SparseCholesky>

namespace edgerec {

namespace {

using Dense = Eigen::MatrixXcd;

class BasisBuilder {
 public:
  BasisBuilder(const SpMat& S, const SpMat& M, Eigen::Index n, Eigen::Index capacity,
               std::mt19937_64& gen)
      : S_(S), M_(M), gen_(gen), V_(n, capacity), MV_(n, capacity), SV_(n, capacity) {}

  Eigen::Index size() const { return cols_; }
  Dense& V() { return V_; }
  Dense& MV() { return MV_; }
  Dense& SV() { return SV_; }

  void reset(Eigen::Index keep) { cols_ = keep; }

  // M-orthogonalize z against the basis and append it; random replacement
  // when z lies (numerically) in the span of the basis.
  void append(CVec z) {
    for (int attempt = 0; attempt < 5; ++attempt) {
      CVec mz = M_ * z;
      const double norm0 = std::sqrt(std::abs(z.dot(mz)));
      for (int pass = 0; pass < 2; ++pass) {
        if (cols_ > 0) {
          const CVec coef = V_.leftCols(cols_).adjoint() * mz;
          z.noalias() -= V_.leftCols(cols_) * coef;
          mz.noalias() -= MV_.leftCols(cols_) * coef;
        }
      }
      const double norm = std::sqrt(std::abs(z.dot(mz)));
      if (norm > 1e-10 * norm0 && norm > 0.0) {
        V_.col(cols_) = z / norm;
        MV_.col(cols_) = mz / norm;
        SV_.col(cols_) = S_ * V_.col(cols_);
        ++cols_;
        return;
      }
      z = random_vector();
    }
    throw EigenSolverError("could not extend the Krylov basis");
  }

  CVec random_vector() {
    std::normal_distribution<double> nd;
    CVec z(V_.rows());
    for (Eigen::Index i = 0; i < z.size(); ++i) z(i) = cplx(nd(gen_), nd(gen_));
    return z;
  }

 private:
  const SpMat& S_;
  const SpMat& M_;
  std::mt19937_64& gen_;
  Dense V_;
  Dense MV_;
  Dense SV_;
  Eigen::Index cols_ = 0;
};

}  // namespace

EigenResult solve_gevp(const SpMat& S, const SpMat& M, const EigenOptions& opts) {
  const Eigen::Index n = S.rows();
  if (S.cols() != n || M.rows() != n || M.cols() != n) {
    throw EigenSolverError("solve_gevp: dimension mismatch");
  }
  if (opts.m < 1 || opts.m > n) throw EigenSolverError("solve_gevp: m out of range");
  if (!(opts.tol > 0.0)) throw EigenSolverError("solve_gevp: tol must be positive");

  const Eigen::Index m = opts.m;
  const Eigen::Index p = std::min<Eigen::Index>(
      n, opts.subspace > 0 ? opts.subspace : std::max<Eigen::Index>(2 * m, m + 8));
  const Eigen::Index b = std::clamp<Eigen::Index>(opts.block, 1, std::max<Eigen::Index>(1, p - m));
  const Eigen::Index keep = std::min(p - b, m + (p - m) / 2);

  Eigen::SimplicialLDLT<SpMat, Eigen::Lower, Eigen::AMDOrdering<int>> ldlt(S);
  if (ldlt.info() != Eigen::Success) {
    throw EigenSolverError("factorization of the shifted operator failed");
  }
  EigenResult res;
  res.factorizations = 1;

  std::mt19937_64 gen(opts.seed);
  // Capacity p + b: the tail holds the continuation block while it is
  // orthogonalized against a full basis.
  BasisBuilder basis(S, M, n, p + b, gen);
  Dense TV(n, p);   // T = S^{-1} M applied to each basis column
  Dense MTV(n, p);

  Dense pending(n, b);
  for (Eigen::Index c = 0; c < b; ++c) pending.col(c) = basis.random_vector();

  double best = std::numeric_limits<double>::infinity();
  for (int iter = 1; iter <= opts.max_iter; ++iter) {
    res.iterations = iter;
    // Expand by whole blocks; the block that no longer fits is orthogonalized
    // against the basis and kept pending for the next restart.
    while (true) {
      const Eigen::Index start = basis.size();
      const Eigen::Index take = std::min<Eigen::Index>(pending.cols(), n - start);
      for (Eigen::Index c = 0; c < take; ++c) basis.append(pending.col(c));
      const Eigen::Index added = basis.size() - start;
      const Dense rhs = basis.MV().middleCols(start, added);
      TV.middleCols(start, added) = ldlt.solve(rhs);
      MTV.middleCols(start, added) = M * TV.middleCols(start, added);
      res.solves += static_cast<int>(added);
      pending = TV.middleCols(start, added);
      if (basis.size() + pending.cols() > p || basis.size() == n) {
        const Eigen::Index full = basis.size();
        for (Eigen::Index c = 0; c < pending.cols() && basis.size() < n; ++c) {
          basis.append(pending.col(c));
        }
        pending = basis.V().middleCols(full, basis.size() - full);
        basis.reset(full);
        break;
      }
    }

    // Rayleigh-Ritz for T in the M inner product: H = V^H M T V.
    const Eigen::Index k = basis.size();
    const auto V = basis.V().leftCols(k);
    Dense H = V.adjoint() * MTV.leftCols(k);
    H = 0.5 * (H + H.adjoint()).eval();
    Eigen::SelfAdjointEigenSolver<Dense> es(H);
    if (es.info() != Eigen::Success) throw EigenSolverError("projected eigenproblem failed");
    // Largest mu = 1/E first.
    const Eigen::VectorXd mu = es.eigenvalues().reverse();
    const Dense Q = es.eigenvectors().rowwise().reverse();

    const Eigen::Index nw = std::min(m, k);
    Dense X = V * Q.leftCols(nw);
    Dense SX = basis.SV().leftCols(k) * Q.leftCols(nw);
    Dense MX = basis.MV().leftCols(k) * Q.leftCols(nw);
    Eigen::VectorXd theta(nw), resid(nw);
    double worst = 0.0;
    for (Eigen::Index i = 0; i < nw; ++i) {
      theta(i) = X.col(i).dot(SX.col(i)).real() / X.col(i).dot(MX.col(i)).real();
      const double r = (SX.col(i) - theta(i) * MX.col(i)).norm();
      resid(i) = r / (std::abs(theta(i)) * MX.col(i).norm());
      worst = std::max(worst, resid(i));
    }
    best = std::min(best, worst);

    if (nw == m && (worst < opts.tol || k == n)) {
      std::vector<Eigen::Index> order(static_cast<size_t>(m));
      std::iota(order.begin(), order.end(), 0);
      std::stable_sort(order.begin(), order.end(),
                       [&](auto a, auto c) { return theta(a) < theta(c); });
      res.eigenvalues.resize(m);
      res.residuals.resize(m);
      res.eigenvectors.resize(n, m);
      for (Eigen::Index i = 0; i < m; ++i) {
        res.eigenvalues(i) = theta(order[i]);
        res.residuals(i) = resid(order[i]);
        res.eigenvectors.col(i) = X.col(order[i]);
      }
      res.converged = true;
      return res;
    }

    // Thick restart: keep the leading Ritz vectors and their T-images.
    const Eigen::Index kk = std::min(keep, k);
    Dense newV = V * Q.leftCols(kk);
    Dense newMV = basis.MV().leftCols(k) * Q.leftCols(kk);
    Dense newSV = basis.SV().leftCols(k) * Q.leftCols(kk);
    Dense newTV = TV.leftCols(k) * Q.leftCols(kk);
    Dense newMTV = MTV.leftCols(k) * Q.leftCols(kk);
    basis.V().leftCols(kk) = newV;
    basis.MV().leftCols(kk) = newMV;
    basis.SV().leftCols(kk) = newSV;
    TV.leftCols(kk) = newTV;
    MTV.leftCols(kk) = newMTV;
    basis.reset(kk);
    if (pending.cols() == 0) {
      pending.resize(n, b);
      for (Eigen::Index c = 0; c < b; ++c) pending.col(c) = basis.random_vector();
    }
  }

  std::ostringstream os;
  os << "eigensolver did not converge in " << opts.max_iter
     << " restarts; best max residual " << best;
  throw EigenSolverError(os.str());
}

EigenResult solve_gevp_dense(const SpMat& S, const SpMat& M, int m) {
  const Dense s = Dense(S);
  const Dense mm = Dense(M);
  Eigen::GeneralizedSelfAdjointEigenSolver<Dense> es(s, mm);
  if (es.info() != Eigen::Success) throw EigenSolverError("dense generalized solve failed");
  EigenResult res;
  res.eigenvalues = es.eigenvalues().head(m);
  res.eigenvectors = es.eigenvectors().leftCols(m);
  res.residuals = Eigen::VectorXd::Zero(m);
  res.converged = true;
  return res;
}

}  // namespace edgerec
