#pragma once

#include <complex>
#include <iosfwd>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "edgerec/material.hpp"
#include "edgerec/mesh.hpp"
#include "edgerec/quadrature.hpp"

namespace edgerec {

using SpMat = Eigen::SparseMatrix<cplx>;
using SpMatReal = Eigen::SparseMatrix<double>;
using CVec = Eigen::VectorXcd;

/// Constant P1 data of one triangle.
struct ElementGeometry {
  double area = 0.0;
  std::array<Vec2, 3> grad;  // gradients of the three hat functions
};

ElementGeometry element_geometry(const CylinderMesh& mesh, const Triangle& t);

/// Weight values at every quadrature point of every triangle, evaluated once
/// per (mesh, material) and shared by assembly and the eigenvalue correction.
struct WeightField {
  int quad_order = 0;
  std::vector<QuadPoint> rule;
  std::vector<ElementGeometry> geometry;  // per triangle
  std::vector<HermMat2> values;           // triangle-major, rule.size() per triangle

  const HermMat2& at(size_t tri, size_t q) const { return values[tri * rule.size() + q]; }
};

WeightField sample_weight(const CylinderMesh& mesh, const DomainWallSpec& spec, int quad_order);

/// Sparse forms on the reduced dofs, rows indexed by the test function:
///   A_stiff(a,b)   = int grad(phi_a)^T W grad(phi_b)
///   B_mixed(a,b)   = int phi_a k1^T W grad(phi_b)
///   C_mass_k1(a,b) = int phi_a phi_b k1^T W k1
///   M_mass(a,b)    = int phi_a phi_b
/// M_periodic is the mass matrix on periodic nodes with the Dirichlet rows kept.
struct MatrixSet {
  SpMat A_stiff;
  SpMat B_mixed;
  SpMat C_mass_k1;
  SpMat M_mass;
  SpMatReal M_periodic;
  int quad_order = 0;
};

struct AssemblyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

MatrixSet assemble(const CylinderMesh& mesh, const DofMap& map, const WeightField& weight);
MatrixSet assemble(const CylinderMesh& mesh, const DofMap& map, const DomainWallSpec& spec,
                   int quad_order);

/// S(k) = A - i t B + i t B^H + t^2 C with t = k / 2 pi. Built as
/// (A + t^2 C) + (G + G^H), G = -i t B, so S equals its adjoint bitwise.
struct BlochStiffness {
  SpMat S;
  double k_par = 0.0;
};

BlochStiffness bloch_stiffness(const MatrixSet& ms, double k_par);

/// Coordinate text dump: one "row col re im" line per stored entry.
void write_matrix_coo(const SpMat& m, std::ostream& os);

}  // namespace edgerec
