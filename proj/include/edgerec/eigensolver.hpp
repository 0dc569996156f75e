#pragma once

#include <cstdint>
#include <vector>

#include "edgerec/assembly.hpp"

namespace edgerec {

struct EigenOptions {
  int m = 6;                 // number of eigenpairs wanted
  double tol = 1e-9;         // relative residual |Sv - EMv| / (|E| |Mv|)
  int max_iter = 500;        // restart cap
  std::uint64_t seed = 20190611;
  int subspace = 0;          // 0: max(2m, m + 8)
  int block = 4;             // Krylov block width
};

struct EigenResult {
  Eigen::VectorXd eigenvalues;     // ascending
  Eigen::MatrixXcd eigenvectors;   // M-orthonormal columns
  Eigen::VectorXd residuals;
  int iterations = 0;
  int factorizations = 0;
  int solves = 0;
  bool converged = false;
};

struct EigenSolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// m eigenpairs of the Hermitian-definite pencil (S, M) nearest to zero from
/// above, by shift-invert (sigma = 0) thick-restart block Krylov iteration in
/// the M inner product. S is factorized once. Non-convergence after max_iter
/// restarts throws EigenSolverError carrying the best residual.
EigenResult solve_gevp(const SpMat& S, const SpMat& M, const EigenOptions& opts);

/// Dense reference solve of the same pencil (all eigenpairs); for tests and
/// small problems only.
EigenResult solve_gevp_dense(const SpMat& S, const SpMat& M, int m);

}  // namespace edgerec
