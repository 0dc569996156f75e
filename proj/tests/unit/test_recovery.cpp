#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <functional>

#include "edgerec/lattice.hpp"
#include "edgerec/recovery.hpp"
#include "helpers.hpp"

using namespace edgerec;

namespace {

struct Setup {
  CylinderMesh mesh;
  DofMap map;
  std::vector<NodePatch> patches;
  RecoveryOperator op;
};

Setup make(int N, int L) {
  Setup s{build_mesh(N, L), {}, {}, {}};
  s.map = build_dof_map(s.mesh);
  s.patches = build_patches(s.mesh, s.map);
  s.op = build_recovery(s.mesh, s.map, s.patches);
  return s;
}

using Field = std::function<double(const Vec2&)>;

// Samples f at each periodic node, expanded about the node's own position so
// the seam representative is consistent with the patch's unwrapped offsets.
Eigen::VectorXd sample(const Setup& s, const Field& f) {
  Eigen::VectorXd u(s.map.n_periodic());
  for (int p = 0; p < s.map.n_periodic(); ++p) u(p) = f(s.mesh.nodes[s.map.periodic_to_node[p]].x);
  return u;
}

}  // namespace

TEST_CASE("local fit reproduces constants, linears and quadratics") {
  const Setup s = make(8, 1);
  const NodePatch& p = s.patches[s.map.node_to_periodic[s.mesh.node_index(3, 8)]];
  const Vec2 c = s.mesh.nodes[s.map.periodic_to_node[p.center]].x;
  auto values = [&](const Field& f) {
    Eigen::VectorXd v(p.members.size());
    for (size_t r = 0; r < p.members.size(); ++r) v(r) = f(c + p.scale * p.local.row(r).transpose());
    return v;
  };
  CHECK(fit_local_quadratic(p, values([](const Vec2&) { return 1.0; })).norm() < 1e-12);
  const Vec2 g1 = fit_local_quadratic(p, values([](const Vec2& x) { return 3 * x(0) - 2 * x(1); }));
  CHECK((g1 - Vec2(3, -2)).norm() < 1e-11);
  const Vec2 g2 = fit_local_quadratic(p, values([](const Vec2& x) { return x(0) * x(0) + x(0) * x(1); }));
  CHECK((g2 - Vec2(2 * c(0) + c(1), c(0))).norm() < 1e-11);
}

TEST_CASE("quadratic monomials are recovered exactly on interior and seam patches") {
  const std::vector<std::pair<Field, std::pair<Field, Field>>> monos = {
      {[](const Vec2&) { return 1.0; }, {[](const Vec2&) { return 0.0; }, [](const Vec2&) { return 0.0; }}},
      {[](const Vec2& x) { return x(0); }, {[](const Vec2&) { return 1.0; }, [](const Vec2&) { return 0.0; }}},
      {[](const Vec2& x) { return x(1); }, {[](const Vec2&) { return 0.0; }, [](const Vec2&) { return 1.0; }}},
      {[](const Vec2& x) { return x(0) * x(0); }, {[](const Vec2& x) { return 2 * x(0); }, [](const Vec2&) { return 0.0; }}},
      {[](const Vec2& x) { return x(0) * x(1); }, {[](const Vec2& x) { return x(1); }, [](const Vec2& x) { return x(0); }}},
      {[](const Vec2& x) { return x(1) * x(1); }, {[](const Vec2&) { return 0.0; }, [](const Vec2& x) { return 2 * x(1); }}},
  };
  for (int N : {8, 16}) {
    const Setup s = make(N, 1);
    for (const NodePatch& p : s.patches) {
      // Polynomials are not periodic, so sample them in the patch frame.
      const Vec2 c = s.mesh.nodes[s.map.periodic_to_node[p.center]].x;
      const MeshNode& cn = s.mesh.nodes[s.map.periodic_to_node[p.center]];
      if (cn.j < 2 || cn.j > s.mesh.ny() - 3) continue;
      for (const auto& [f, grad] : monos) {
        Eigen::VectorXd v(p.members.size());
        for (size_t r = 0; r < p.members.size(); ++r) v(r) = f(c + p.scale * p.local.row(r).transpose());
        const Vec2 g = fit_local_quadratic(p, v);
        CHECK(std::abs(g(0) - grad.first(c)) < 1e-11);
        CHECK(std::abs(g(1) - grad.second(c)) < 1e-11);
      }
    }
  }
}

TEST_CASE("matrix rows agree with the local fit") {
  const Setup s = make(8, 1);
  const Eigen::VectorXd u = Eigen::VectorXd::Random(s.map.n_periodic());
  const Eigen::VectorXd gx = s.op.Gx * u, gy = s.op.Gy * u;
  for (const NodePatch& p : s.patches) {
    Eigen::VectorXd v(p.members.size());
    for (size_t r = 0; r < p.members.size(); ++r) v(r) = u(p.members[r]);
    const Vec2 g = fit_local_quadratic(p, v);
    CHECK(std::abs(g(0) - gx(p.center)) < 1e-10);
    CHECK(std::abs(g(1) - gy(p.center)) < 1e-10);
  }
}

TEST_CASE("periodic fields recover exactly at seam nodes as at their twins") {
  // A quadratic in tau2 only is periodic in tau1, so the seam patch sees the
  // same data as an interior patch.
  const Setup s = make(16, 1);
  const Field f = [](const Vec2& x) {
    const double t2 = to_lattice_coords(make_honeycomb_basis(), x).tau2;
    return 1 + 2 * t2 - 3 * t2 * t2;
  };
  const Eigen::VectorXd u = sample(s, f);
  const CVec uc = u.cast<cplx>();
  const RecoveredGradient g = recover_gradient(s.op, uc);
  const LatticeBasis b = make_honeycomb_basis();
  for (int p = 0; p < s.map.n_periodic(); ++p) {
    const MeshNode& n = s.mesh.nodes[s.map.periodic_to_node[p]];
    if (n.j < 2 || n.j > s.mesh.ny() - 3) continue;
    const Vec2 exact = (2 - 6 * n.tau2) * b.k2 / (2 * testing::kPi);
    CHECK(std::abs(g.ux(p) - exact(0)) < 1e-11);
    CHECK(std::abs(g.uy(p) - exact(1)) < 1e-11);
  }
}

TEST_CASE("constants recover to zero and zero to zero") {
  const Setup s = make(8, 2);
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(s.map.n_periodic());
  CHECK((s.op.Gx * ones).cwiseAbs().maxCoeff() < 1e-10);
  CHECK((s.op.Gy * ones).cwiseAbs().maxCoeff() < 1e-10);
  const RecoveredGradient g = recover_gradient(s.op, CVec::Zero(s.map.n_periodic()));
  CHECK(g.ux.norm() == 0.0);
  CHECK(g.uy.norm() == 0.0);
}

TEST_CASE("real in, real out, and linearity") {
  const Setup s = make(8, 1);
  const CVec w = Eigen::VectorXd::Random(s.map.n_periodic()).cast<cplx>();
  const RecoveredGradient a = recover_gradient(s.op, w);
  CHECK(a.ux.imag().norm() == 0.0);
  CHECK(a.uy.imag().norm() == 0.0);
  const RecoveredGradient b = recover_gradient(s.op, cplx(0, 1) * w);
  CHECK((b.ux - cplx(0, 1) * a.ux).norm() < 1e-12);
  CHECK((b.uy - cplx(0, 1) * a.uy).norm() < 1e-12);
}

TEST_CASE("operator norm scales like 1/h") {
  std::vector<double> c;
  for (int N : {8, 16, 32}) {
    const Setup s = make(N, 1);
    double row = 0;
    for (int k = 0; k < s.op.Gx.outerSize(); ++k) {
      for (SpMatReal::InnerIterator it(s.op.Gx, k); it; ++it) (void)it;
    }
    const SpMatReal G = s.op.Gx;
    Eigen::VectorXd sums = Eigen::VectorXd::Zero(G.rows());
    for (int k = 0; k < G.outerSize(); ++k) {
      for (SpMatReal::InnerIterator it(G, k); it; ++it) sums(it.row()) += std::abs(it.value());
    }
    row = sums.maxCoeff();
    c.push_back(row / N);
  }
  CHECK(std::abs(c[1] - c[0]) < 1e-10 * c[0] + 1e-9);
  CHECK(std::abs(c[2] - c[1]) < 1e-10 * c[0] + 1e-9);
}

TEST_CASE("recovered gradient of a smooth periodic field converges at second order") {
  const LatticeBasis b = make_honeycomb_basis();
  std::vector<double> err, h;
  for (int N : {16, 32, 64}) {
    const Setup s = make(N, 1);
    const Eigen::VectorXd u = sample(s, [&](const Vec2& x) { return std::sin(b.k1.dot(x)); });
    const Eigen::VectorXd gx = s.op.Gx * u;
    double worst = 0;
    for (int p = 0; p < s.map.n_periodic(); ++p) {
      const Vec2& x = s.mesh.nodes[s.map.periodic_to_node[p]].x;
      worst = std::max(worst, std::abs(gx(p) - b.k1(0) * std::cos(b.k1.dot(x))));
    }
    err.push_back(worst);
    h.push_back(1.0 / N);
  }
  const double slope = std::log(err[0] / err[2]) / std::log(h[0] / h[2]);
  CAPTURE(err[0]);
  CAPTURE(err[2]);
  CHECK(slope >= 2.0 - 0.05);
}

TEST_CASE("zero extension") {
  const Setup s = make(4, 1);
  const CVec d = CVec::Constant(s.map.n_dof(), cplx(1, 2));
  const CVec z = zero_extend(s.map, d);
  for (int p = 0; p < s.map.n_periodic(); ++p) {
    const MeshNode& n = s.mesh.nodes[s.map.periodic_to_node[p]];
    const bool dir = n.j == 0 || n.j == s.mesh.ny() - 1;
    CHECK(z(p) == (dir ? cplx(0, 0) : cplx(1, 2)));
  }
}
