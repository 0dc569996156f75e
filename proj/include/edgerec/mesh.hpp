#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "edgerec/lattice.hpp"

namespace edgerec {

enum class NodeClass { Interior, SeamMaster, SeamSlave, Dirichlet };
enum class Diagonal { Regular, Alternating };

const char* to_string(NodeClass c);
Diagonal parse_diagonal(const std::string& s);
const char* to_string(Diagonal d);

struct MeshNode {
  int i = 0;  // index along v1, 0..N
  int j = 0;  // index along v2, 0..2LN
  double tau1 = 0.0;
  double tau2 = 0.0;
  Vec2 x = Vec2::Zero();
  NodeClass cls = NodeClass::Interior;
};

using Triangle = std::array<int, 3>;

/// Uniform triangulation of the strip {tau1 v1 + tau2 v2 : 0 <= tau1 <= 1,
/// |tau2| <= L}. Node (i, j) sits at tau = (i/N, -L + j/N). Every rhombus is
/// cut by the same diagonal (Regular) or by alternating diagonals.
struct CylinderMesh {
  int N = 0;
  int L = 0;
  double h = 0.0;
  Diagonal diagonal = Diagonal::Regular;
  std::vector<MeshNode> nodes;
  std::vector<Triangle> triangles;

  int nx() const { return N + 1; }
  int ny() const { return 2 * L * N + 1; }
  int node_index(int i, int j) const { return j * nx() + i; }
  double domain_area() const;
};

CylinderMesh build_mesh(int N, int L, Diagonal diagonal = Diagonal::Regular);

/// Signed area of a triangle in Cartesian coordinates.
double signed_area(const CylinderMesh& mesh, const Triangle& t);

/// Degrees of freedom after periodic identification along v1 and removal of
/// the Dirichlet rows at tau2 = +-L.
///
/// Two index spaces exist: "periodic" nodes (seam identified, Dirichlet rows
/// kept; used by gradient recovery) and dofs (Dirichlet rows dropped; used by
/// the eigenproblem).
struct DofMap {
  static constexpr int kEliminated = -1;

  std::vector<int> node_to_dof;        // kEliminated on Dirichlet nodes
  std::vector<int> dof_to_node;
  std::vector<int> node_to_periodic;
  std::vector<int> periodic_to_node;   // representative with i < N
  std::vector<int> periodic_to_dof;    // kEliminated on Dirichlet rows
  std::vector<std::pair<int, int>> seam_pairs;  // (slave, master) node ids

  int n_dof() const { return static_cast<int>(dof_to_node.size()); }
  int n_periodic() const { return static_cast<int>(periodic_to_node.size()); }
};

DofMap build_dof_map(const CylinderMesh& mesh);

/// Least-squares patch for recovery at one periodic node. Local coordinates
/// are member positions relative to the center, divided by h; members across
/// the seam carry their unwrapped position.
struct NodePatch {
  int center = 0;                 // periodic node id
  std::vector<int> members;       // periodic node ids, center first
  Eigen::MatrixX2d local;         // scaled offsets, one row per member
  double scale = 1.0;             // h
  int rings = 1;
};

/// 6-column quadratic Vandermonde [1, s, t, s^2, s t, t^2] of a patch.
Eigen::Matrix<double, Eigen::Dynamic, 6> patch_vandermonde(const NodePatch& p);

/// One patch per periodic node (Dirichlet rows included). Interior patches
/// are the first ring; patches grow ring by ring until they hold at least six
/// nodes and the quadratic fit has full rank.
std::vector<NodePatch> build_patches(const CylinderMesh& mesh, const DofMap& map);

/// Location of a point in the mesh: triangle id and barycentric weights.
struct PointLocation {
  int triangle = 0;
  std::array<double, 3> bary{};
};

/// tau1 is taken modulo 1; tau2 must lie in [-L, L].
PointLocation locate(const CylinderMesh& mesh, double tau1, double tau2);

void write_mesh_nodes_csv(const CylinderMesh& mesh, std::ostream& os);
void write_mesh_triangles_csv(const CylinderMesh& mesh, std::ostream& os);

}  // namespace edgerec
