#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <sstream>

#include "edgerec/mesh.hpp"
#include "helpers.hpp"

using namespace edgerec;

TEST_CASE("smallest mesh counts") {
  const CylinderMesh m = build_mesh(2, 1);
  CHECK(m.triangles.size() == 16);
  CHECK(m.nodes.size() == 15);
  CHECK(build_dof_map(m).n_dof() == 6);
}

TEST_CASE("counts follow the closed forms") {
  for (int N : {2, 3, 8}) {
    for (int L : {1, 2, 3}) {
      const CylinderMesh m = build_mesh(N, L);
      CHECK(m.triangles.size() == static_cast<size_t>(4 * L * N * N));
      CHECK(m.nodes.size() == static_cast<size_t>((N + 1) * (2 * L * N + 1)));
      const DofMap d = build_dof_map(m);
      CHECK(d.n_dof() == N * (2 * L * N - 1));
      CHECK(d.n_periodic() == N * (2 * L * N + 1));
    }
  }
}

TEST_CASE("mesh size") {
  CHECK(build_mesh(64, 10).h == doctest::Approx(1.0 / 64).epsilon(1e-15));
}

TEST_CASE("rejects degenerate sizes") {
  CHECK_THROWS(build_mesh(1, 1));
  CHECK_THROWS(build_mesh(4, 0));
}

TEST_CASE("triangles tile the strip with positive orientation") {
  for (Diagonal dg : {Diagonal::Regular, Diagonal::Alternating}) {
    const CylinderMesh m = build_mesh(8, 2, dg);
    double total = 0, lo = 1e9, hi = 0;
    for (const Triangle& t : m.triangles) {
      const double a = signed_area(m, t);
      total += a;
      lo = std::min(lo, a);
      hi = std::max(hi, a);
    }
    CHECK(lo > 0);
    CHECK(std::abs(hi - lo) < 1e-15);
    CHECK(std::abs(total - std::sqrt(3.0) * 2) < 1e-10);
    CHECK(std::abs(m.domain_area() - std::sqrt(3.0) * 2) < 1e-14);
  }
}

TEST_CASE("regular pattern cuts along the long diagonal") {
  const CylinderMesh m = build_mesh(4, 1);
  // The triangles of the cell at (i, j) share the edge (i, j) - (i+1, j+1).
  const int a = m.node_index(1, 2), b = m.node_index(2, 3);
  int hits = 0;
  for (const Triangle& t : m.triangles) {
    const bool has_a = std::find(t.begin(), t.end(), a) != t.end();
    const bool has_b = std::find(t.begin(), t.end(), b) != t.end();
    hits += has_a && has_b;
  }
  CHECK(hits == 2);
}

TEST_CASE("interior nodes have valence six") {
  const CylinderMesh m = build_mesh(6, 1);
  const DofMap d = build_dof_map(m);
  std::vector<int> count(d.n_periodic(), 0);
  for (const Triangle& t : m.triangles) {
    for (int v : t) ++count[d.node_to_periodic[v]];
  }
  for (int p = 0; p < d.n_periodic(); ++p) {
    const MeshNode& n = m.nodes[d.periodic_to_node[p]];
    if (n.cls != NodeClass::Dirichlet) CHECK(count[p] == 6);
  }
}

TEST_CASE("edges are shared by two triangles except on the Dirichlet rows") {
  const CylinderMesh m = build_mesh(5, 1);
  const DofMap d = build_dof_map(m);
  std::map<std::pair<int, int>, int> edges;
  for (const Triangle& t : m.triangles) {
    for (int e = 0; e < 3; ++e) {
      int a = d.node_to_periodic[t[e]], b = d.node_to_periodic[t[(e + 1) % 3]];
      if (a > b) std::swap(a, b);
      ++edges[{a, b}];
    }
  }
  for (const auto& [e, c] : edges) {
    const MeshNode& na = m.nodes[d.periodic_to_node[e.first]];
    const MeshNode& nb = m.nodes[d.periodic_to_node[e.second]];
    const bool boundary = na.j == nb.j && (na.j == 0 || na.j == m.ny() - 1);
    CHECK(c == (boundary ? 1 : 2));
  }
}

TEST_CASE("dof map identification") {
  const CylinderMesh m = build_mesh(2, 1);
  const DofMap d = build_dof_map(m);
  // tau2 = 0.5 is row j = 3.
  const int slave = m.node_index(2, 3), master = m.node_index(0, 3);
  CHECK(m.nodes[slave].tau1 == doctest::Approx(1.0));
  CHECK(m.nodes[slave].tau2 == doctest::Approx(0.5));
  CHECK(d.node_to_dof[slave] == d.node_to_dof[master]);
  CHECK(d.node_to_dof[master] != DofMap::kEliminated);
  CHECK(m.nodes[slave].cls == NodeClass::SeamSlave);
  CHECK(m.nodes[master].cls == NodeClass::SeamMaster);
  const int bottom = m.node_index(1, 0);
  CHECK(m.nodes[bottom].tau1 == doctest::Approx(0.5));
  CHECK(m.nodes[bottom].tau2 == doctest::Approx(-1.0));
  CHECK(d.node_to_dof[bottom] == DofMap::kEliminated);
  CHECK(m.nodes[bottom].cls == NodeClass::Dirichlet);
  for (int k = 0; k < d.n_dof(); ++k) CHECK(d.node_to_dof[d.dof_to_node[k]] == k);
}

TEST_CASE("dof numbering is row-major over the interior rows") {
  const CylinderMesh m = build_mesh(4, 1);
  const DofMap d = build_dof_map(m);
  for (int j = 1; j < m.ny() - 1; ++j) {
    for (int i = 0; i < m.N; ++i) CHECK(d.node_to_dof[m.node_index(i, j)] == (j - 1) * m.N + i);
  }
}

TEST_CASE("patch shapes") {
  const CylinderMesh m = build_mesh(4, 1);
  const DofMap d = build_dof_map(m);
  const auto patches = build_patches(m, d);
  REQUIRE(patches.size() == static_cast<size_t>(d.n_periodic()));
  Eigen::JacobiSVD<Eigen::MatrixXd> svd;
  for (const NodePatch& p : patches) {
    const MeshNode& c = m.nodes[d.periodic_to_node[p.center]];
    CHECK(p.members.size() >= 6);
    CHECK(p.members.front() == p.center);
    svd.compute(patch_vandermonde(p));
    CHECK(svd.rank() == 6);
    if (c.j >= 2 && c.j <= m.ny() - 3) {
      CHECK(p.members.size() == 7);
      CHECK(p.rings == 1);
    }
    if (c.j == 1 || c.j == m.ny() - 2) {
      // One layer from the boundary: the fit reaches the second ring.
      CHECK(p.rings >= 1);
    }
  }
  // Seam master at tau1 = 0 reaches tau1 = (N-1)/N through the wrap.
  const int master = d.node_to_periodic[m.node_index(0, 4)];
  const int wrapped = d.node_to_periodic[m.node_index(3, 4)];
  const NodePatch& p = patches[master];
  CHECK(std::find(p.members.begin(), p.members.end(), wrapped) != p.members.end());
  for (size_t r = 0; r < p.members.size(); ++r) CHECK(p.local.row(r).norm() < 1.01 * 2);
}

TEST_CASE("patch Vandermonde conditioning") {
  for (int N : {8, 16, 32, 64}) {
    const CylinderMesh m = build_mesh(N, 1);
    const DofMap d = build_dof_map(m);
    double worst = 0;
    for (const NodePatch& p : build_patches(m, d)) {
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(patch_vandermonde(p));
      const auto s = svd.singularValues();
      worst = std::max(worst, s(0) / s(s.size() - 1));
    }
    CAPTURE(N);
    CHECK(worst < 100);
  }
}

TEST_CASE("point location reproduces node coordinates") {
  const CylinderMesh m = build_mesh(4, 1, Diagonal::Alternating);
  for (const MeshNode& n : m.nodes) {
    const PointLocation loc = locate(m, n.tau1 + 0.013, n.tau2 + (n.j + 1 < m.ny() ? 0.007 : -0.007));
    const Triangle& t = m.triangles[loc.triangle];
    Vec2 x = Vec2::Zero();
    double sum = 0;
    for (int a = 0; a < 3; ++a) {
      CHECK(loc.bary[a] > -1e-12);
      sum += loc.bary[a];
      x += loc.bary[a] * Vec2(m.nodes[t[a]].tau1, m.nodes[t[a]].tau2);
    }
    CHECK(std::abs(sum - 1) < 1e-12);
    const double t1 = n.tau1 + 0.013;
    CHECK(std::abs(x(0) - (t1 >= 1 ? t1 - 1 : t1)) < 1e-12);
  }
  CHECK_THROWS(locate(m, 0.5, 1.5));
}

TEST_CASE("mesh CSV headers") {
  const CylinderMesh m = build_mesh(2, 1);
  std::ostringstream a, b;
  write_mesh_nodes_csv(m, a);
  write_mesh_triangles_csv(m, b);
  const std::string nodes = a.str(), tris = b.str();
  CHECK(nodes.rfind("node_id,tau1,tau2,x,y,class\n", 0) == 0);
  CHECK(tris.rfind("tri_id,n0,n1,n2\n", 0) == 0);
  CHECK(std::count(nodes.begin(), nodes.end(), '\n') == 16);
  CHECK(std::count(tris.begin(), tris.end(), '\n') == 17);
}
