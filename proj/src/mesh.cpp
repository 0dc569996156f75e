#include "edgerec/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <stdexcept>

namespace edgerec {

const char* to_string(NodeClass c) {
  switch (c) {
    case NodeClass::Interior: return "interior";
    case NodeClass::SeamMaster: return "seam-master";
    case NodeClass::SeamSlave: return "seam-slave";
    case NodeClass::Dirichlet: return "dirichlet";
  }
  return "?";
}

Diagonal parse_diagonal(const std::string& s) {
  if (s == "regular") return Diagonal::Regular;
  if (s == "alternating") return Diagonal::Alternating;
  throw std::invalid_argument("mesh.diagonal must be \"regular\" or \"alternating\", got \"" + s + "\"");
}

const char* to_string(Diagonal d) {
  return d == Diagonal::Regular ? "regular" : "alternating";
}

double CylinderMesh::domain_area() const {
  return std::numbers::sqrt3 * L;
}

double signed_area(const CylinderMesh& mesh, const Triangle& t) {
  const Vec2& a = mesh.nodes[t[0]].x;
  const Vec2& b = mesh.nodes[t[1]].x;
  const Vec2& c = mesh.nodes[t[2]].x;
  return 0.5 * ((b(0) - a(0)) * (c(1) - a(1)) - (b(1) - a(1)) * (c(0) - a(0)));
}

namespace {

// Rhombus (i, j) split along (i,j)-(i+1,j+1) unless the alternating pattern
// asks for the other diagonal here.
bool uses_main_diagonal(Diagonal d, int i, int j) {
  return d == Diagonal::Regular || ((i + j) % 2 == 0);
}

}  // namespace

CylinderMesh build_mesh(int N, int L, Diagonal diagonal) {
  if (N < 2) throw std::invalid_argument("mesh N must be >= 2");
  if (L < 1) throw std::invalid_argument("mesh L must be >= 1");
  const LatticeBasis b = make_honeycomb_basis();

  CylinderMesh m;
  m.N = N;
  m.L = L;
  m.h = b.v1.norm() / N;
  m.diagonal = diagonal;
  const int nx = m.nx();
  const int ny = m.ny();
  m.nodes.resize(static_cast<size_t>(nx) * ny);
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      MeshNode& n = m.nodes[m.node_index(i, j)];
      n.i = i;
      n.j = j;
      n.tau1 = static_cast<double>(i) / N;
      n.tau2 = -L + static_cast<double>(j) / N;
      n.x = n.tau1 * b.v1 + n.tau2 * b.v2;
      if (j == 0 || j == ny - 1) n.cls = NodeClass::Dirichlet;
      else if (i == 0) n.cls = NodeClass::SeamMaster;
      else if (i == N) n.cls = NodeClass::SeamSlave;
      else n.cls = NodeClass::Interior;
    }
  }

  m.triangles.reserve(static_cast<size_t>(4) * L * N * N);
  for (int j = 0; j + 1 < ny; ++j) {
    for (int i = 0; i < N; ++i) {
      const int p00 = m.node_index(i, j);
      const int p10 = m.node_index(i + 1, j);
      const int p11 = m.node_index(i + 1, j + 1);
      const int p01 = m.node_index(i, j + 1);
      std::array<Triangle, 2> tris;
      if (uses_main_diagonal(diagonal, i, j)) {
        tris = {Triangle{p00, p10, p11}, Triangle{p00, p11, p01}};
      } else {
        tris = {Triangle{p00, p10, p01}, Triangle{p10, p11, p01}};
      }
      for (auto t : tris) {
        if (signed_area(m, t) < 0.0) std::swap(t[1], t[2]);
        m.triangles.push_back(t);
      }
    }
  }
  return m;
}

DofMap build_dof_map(const CylinderMesh& mesh) {
  DofMap map;
  const int N = mesh.N;
  const int ny = mesh.ny();
  const size_t n_nodes = mesh.nodes.size();
  map.node_to_dof.assign(n_nodes, DofMap::kEliminated);
  map.node_to_periodic.assign(n_nodes, -1);

  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < N; ++i) {
      const int node = mesh.node_index(i, j);
      const int pid = static_cast<int>(map.periodic_to_node.size());
      map.periodic_to_node.push_back(node);
      map.node_to_periodic[node] = pid;
      if (mesh.nodes[node].cls == NodeClass::Dirichlet) {
        map.periodic_to_dof.push_back(DofMap::kEliminated);
      } else {
        map.periodic_to_dof.push_back(static_cast<int>(map.dof_to_node.size()));
        map.node_to_dof[node] = static_cast<int>(map.dof_to_node.size());
        map.dof_to_node.push_back(node);
      }
    }
    const int slave = mesh.node_index(N, j);
    const int master = mesh.node_index(0, j);
    map.node_to_periodic[slave] = map.node_to_periodic[master];
    map.node_to_dof[slave] = map.node_to_dof[master];
    map.seam_pairs.emplace_back(slave, master);
  }
  return map;
}

Eigen::Matrix<double, Eigen::Dynamic, 6> patch_vandermonde(const NodePatch& p) {
  const Eigen::Index n = p.local.rows();
  Eigen::Matrix<double, Eigen::Dynamic, 6> v(n, 6);
  for (Eigen::Index r = 0; r < n; ++r) {
    const double s = p.local(r, 0);
    const double t = p.local(r, 1);
    v.row(r) << 1.0, s, t, s * s, s * t, t * t;
  }
  return v;
}

namespace {

struct Neighbor {
  int id;
  Vec2 offset;
};

bool full_rank(const NodePatch& p) {
  if (p.local.rows() < 6) return false;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(patch_vandermonde(p));
  const auto& sv = svd.singularValues();
  return sv(5) > 1e-8 * sv(0);
}

}  // namespace

std::vector<NodePatch> build_patches(const CylinderMesh& mesh, const DofMap& map) {
  const int np = map.n_periodic();
  std::vector<std::vector<Neighbor>> adj(np);
  for (const auto& t : mesh.triangles) {
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) {
        if (a == b) continue;
        const int pa = map.node_to_periodic[t[a]];
        const int pb = map.node_to_periodic[t[b]];
        auto& list = adj[pa];
        const bool seen = std::any_of(list.begin(), list.end(),
                                      [&](const Neighbor& n) { return n.id == pb; });
        if (!seen && pa != pb) {
          list.push_back({pb, mesh.nodes[t[b]].x - mesh.nodes[t[a]].x});
        }
      }
    }
  }

  std::vector<NodePatch> patches(np);
  for (int c = 0; c < np; ++c) {
    std::vector<Neighbor> members{{c, Vec2::Zero()}};
    std::vector<char> in_patch(np, 0);
    in_patch[c] = 1;
    NodePatch patch;
    patch.center = c;
    patch.scale = mesh.h;
    patch.rings = 0;
    size_t frontier_begin = 0;
    while (true) {
      const size_t frontier_end = members.size();
      for (size_t k = frontier_begin; k < frontier_end; ++k) {
        const Neighbor m = members[k];
        for (const auto& n : adj[m.id]) {
          if (!in_patch[n.id]) {
            in_patch[n.id] = 1;
            members.push_back({n.id, m.offset + n.offset});
          }
        }
      }
      frontier_begin = frontier_end;
      ++patch.rings;
      patch.members.clear();
      patch.local.resize(static_cast<Eigen::Index>(members.size()), 2);
      for (size_t k = 0; k < members.size(); ++k) {
        patch.members.push_back(members[k].id);
        patch.local.row(static_cast<Eigen::Index>(k)) = members[k].offset.transpose() / mesh.h;
      }
      if (full_rank(patch)) break;
      if (frontier_begin == members.size() || patch.rings > 4) {
        throw std::runtime_error("recovery patch at periodic node " + std::to_string(c) +
                                 " cannot reach a full-rank quadratic fit");
      }
    }
    patches[c] = std::move(patch);
  }
  return patches;
}

PointLocation locate(const CylinderMesh& mesh, double tau1, double tau2) {
  const int N = mesh.N;
  double s1 = tau1 - std::floor(tau1);
  double u = s1 * N;
  double v = (tau2 + mesh.L) * N;
  if (v < -1e-9 || v > (mesh.ny() - 1) + 1e-9) {
    throw std::out_of_range("point outside the truncated strip");
  }
  int i = std::clamp(static_cast<int>(std::floor(u)), 0, N - 1);
  int j = std::clamp(static_cast<int>(std::floor(v)), 0, mesh.ny() - 2);
  const double s = u - i;
  const double t = v - j;
  const int cell = 2 * (j * N + i);
  const bool main = uses_main_diagonal(mesh.diagonal, i, j);

  // Triangle vertices in the (s, t) unit square, matched to stored order.
  auto bary_of = [&](int tri, const std::array<std::array<double, 2>, 3>& corners,
                     const std::array<int, 3>& ids) {
    PointLocation loc;
    loc.triangle = tri;
    const auto& p0 = corners[0];
    const auto& p1 = corners[1];
    const auto& p2 = corners[2];
    const double det = (p1[0] - p0[0]) * (p2[1] - p0[1]) - (p2[0] - p0[0]) * (p1[1] - p0[1]);
    const double l1 = ((s - p0[0]) * (p2[1] - p0[1]) - (p2[0] - p0[0]) * (t - p0[1])) / det;
    const double l2 = ((p1[0] - p0[0]) * (t - p0[1]) - (s - p0[0]) * (p1[1] - p0[1])) / det;
    const std::array<double, 3> lam{1.0 - l1 - l2, l1, l2};
    const Triangle& stored = mesh.triangles[tri];
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) {
        if (stored[b] == ids[a]) loc.bary[b] = lam[a];
      }
    }
    return loc;
  };

  const int p00 = mesh.node_index(i, j);
  const int p10 = mesh.node_index(i + 1, j);
  const int p11 = mesh.node_index(i + 1, j + 1);
  const int p01 = mesh.node_index(i, j + 1);
  if (main) {
    if (s >= t) return bary_of(cell, {{{0, 0}, {1, 0}, {1, 1}}}, {p00, p10, p11});
    return bary_of(cell + 1, {{{0, 0}, {1, 1}, {0, 1}}}, {p00, p11, p01});
  }
  if (s + t <= 1.0) return bary_of(cell, {{{0, 0}, {1, 0}, {0, 1}}}, {p00, p10, p01});
  return bary_of(cell + 1, {{{1, 0}, {1, 1}, {0, 1}}}, {p10, p11, p01});
}

void write_mesh_nodes_csv(const CylinderMesh& mesh, std::ostream& os) {
  os << "node_id,tau1,tau2,x,y,class\n";
  os.precision(17);
  for (size_t k = 0; k < mesh.nodes.size(); ++k) {
    const auto& n = mesh.nodes[k];
    os << k << ',' << n.tau1 << ',' << n.tau2 << ',' << n.x(0) << ',' << n.x(1) << ','
       << to_string(n.cls) << '\n';
  }
}

void write_mesh_triangles_csv(const CylinderMesh& mesh, std::ostream& os) {
  os << "tri_id,n0,n1,n2\n";
  for (size_t k = 0; k < mesh.triangles.size(); ++k) {
    const auto& t = mesh.triangles[k];
    os << k << ',' << t[0] << ',' << t[1] << ',' << t[2] << '\n';
  }
}

}  // namespace edgerec
