#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "edgerec/commands.hpp"
#include "edgerec/config.hpp"
#include "helpers.hpp"

using namespace edgerec;
namespace fs = std::filesystem;

namespace {

const char* kMinimal = R"({"material": {"a0": 23, "C": [-0.5, 0, 0, -0.5], "delta": 6}})";

std::string first_line(const std::string& s) { return s.substr(0, s.find('\n')); }

std::string error_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("shipped configs load and validate") {
  int count = 0;
  for (const char* scale : {"desk", "full"}) {
    for (const auto& entry : fs::directory_iterator(fs::path(EDGEREC_CONFIG_DIR) / scale)) {
      CAPTURE(entry.path().string());
      RunConfig cfg;
      REQUIRE_NOTHROW(cfg = load_config(entry.path().string()));
      std::ostringstream os;
      CHECK(cmd_validate(cfg, os));
      ++count;
    }
  }
  CHECK(count >= 14);
}

TEST_CASE("test case 1 parameters") {
  const RunConfig cfg = load_config(std::string(EDGEREC_CONFIG_DIR) + "/desk/testcase1.json");
  CHECK(cfg.material.bulk.a0 == 23.0);
  CHECK(cfg.material.bulk.C(0, 0) == -0.5);
  CHECK(cfg.material.bulk.C(1, 1) == -0.5);
  CHECK(cfg.material.bulk.C(0, 1) == 0.0);
  CHECK(cfg.material.delta == 6.0);
  CHECK(cfg.material.perturbation.kind == PerturbationKind::PBreaking);
  CHECK(cfg.material.wall.name == "tanh");
  CHECK(cfg.mesh.N == 32);
  CHECK(cfg.mesh.L == 10);
  CHECK(cfg.sweep.K == 33);
  CHECK(cfg.sweep.m == 25);
  const SweepOptions so = sweep_options(cfg, 3);
  CHECK(so.threads == 3);
  CHECK(so.N == 32);
  CHECK(so.solver.m == 25);
}

TEST_CASE("defaults fill missing sections") {
  const RunConfig cfg = parse_config(kMinimal);
  CHECK(cfg.mesh.N == 32);
  CHECK(cfg.sweep.K == 33);
  CHECK(cfg.convergence.N_list == std::vector<int>{16, 32, 64, 128});
  CHECK(cfg.classify.theta_center == 0.8);
  CHECK(cfg.material.wall.eta_infinity == 1.0);
}

TEST_CASE("invalid configs are rejected with a useful message") {
  CHECK(error_of(R"({"mesh": {"N": 8}})").find("material") != std::string::npos);
  CHECK(error_of(R"({"material": {"a0": 1}, "mesh": {"N": 1}})").find("mesh.N") != std::string::npos);
  CHECK(error_of(R"({"material": {"a0": 1, "foo": 2}})").find("material.foo") != std::string::npos);
  CHECK(error_of(R"({"material": {"a0": 1}, "sweep": {"K": 1}})") != "");
  CHECK(error_of(R"({"material": {"a0": 1}, "mesh": {"quad_order": 5}})") != "");
  CHECK(error_of(R"({"material": {"a0": 1, "delta": -1}})") != "");
  CHECK(error_of(R"({"material": {"a0": 1, "wall_profile": "sine"}})") != "");
  CHECK(error_of(R"({"material": {"a0": 1}, "convergence": {"N_list": [8, 12]}})") != "");
  const std::string parse = error_of("{\n  \"material\": {\n    \"a0\": ,\n  }\n}");
  CAPTURE(parse);
  CHECK(parse.find("line 3") != std::string::npos);
  CHECK_THROWS_AS(load_config("/nonexistent/x.json"), ConfigError);
}

TEST_CASE("custom Fourier perturbation") {
  const RunConfig cfg = parse_config(R"({"material": {"a0": 23, "delta": 1,
      "perturbation": {"kind": "custom", "terms": [
        {"m1": 1, "m2": 0, "coeff": [1, 0, 0, 0, 0, 0, 1, 0]},
        {"m1": -1, "m2": 0, "coeff": [1, 0, 0, 0, 0, 0, 1, 0]}]}}})");
  REQUIRE(cfg.material.perturbation.terms.size() == 2);
  CHECK(cfg.material.perturbation.terms[0].coeff(1, 1) == cplx(1, 0));
}

TEST_CASE("csv outputs have the documented layout and round-trip") {
  RunConfig cfg = parse_config(kMinimal);
  cfg.mesh.N = 6;
  cfg.mesh.L = 2;
  cfg.sweep.K = 3;
  cfg.sweep.m = 4;
  cfg.output.write_mesh = true;
  const fs::path dir = fs::temp_directory_path() / "edgerec_test_config";
  fs::remove_all(dir);

  const BandsOutcome out = cmd_bands(cfg, dir, 1);
  CHECK(out.failed_k == 0);
  std::ifstream in(out.file);
  std::string header, line;
  std::getline(in, header);
  CHECK(header == "k_index,k_par,band,E_fem,E_recovered,center_fraction,boundary_fraction,class");
  int rows = 0;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string f;
    std::vector<std::string> fields;
    while (std::getline(ls, f, ',')) fields.push_back(f);
    const int kj = std::stoi(fields[0]), b = std::stoi(fields[2]) - 1;
    CHECK(std::stod(fields[1]) == doctest::Approx(out.result.bands.k_grid[kj]).epsilon(1e-15));
    CHECK(std::stod(fields[3]) == doctest::Approx(out.result.bands.e_fem(kj, b)).epsilon(1e-15));
    ++rows;
  }
  CHECK(rows == static_cast<int>(out.result.bands.k_grid.size()) * 4);

  std::ifstream nodes(dir / "mesh_nodes.csv"), tris(dir / "mesh_triangles.csv");
  std::getline(nodes, header);
  CHECK(header == "node_id,tau1,tau2,x,y,class");
  std::getline(tris, header);
  CHECK(header == "tri_id,n0,n1,n2");

  const auto files = cmd_modes(cfg, 2.0943951023931953, {1, 3}, dir);
  REQUIRE(files.size() == 2);
  CHECK(files[1].filename() == "mode_k2.0944_b3.csv");
  std::ifstream mode(files[0]);
  std::getline(mode, header);
  CHECK(header == "tau1,tau2,x,y,re,im,abs");
  int mrows = 0;
  while (std::getline(mode, line)) ++mrows;
  CHECK(mrows == 6 * (2 * 2 * 6 + 1) + 2 * 2 * 6 + 1);
  CHECK_THROWS(cmd_modes(cfg, 1.0, {0}, dir));

  cfg.mesh.L = 1;
  const ConvergenceReport rep = cmd_converge(cfg, {4, 8, 16}, dir);
  std::ifstream conv(dir / "convergence.csv"), slopes(dir / "slopes.csv");
  std::getline(conv, header);
  CHECK(header == "pair,N_coarse,N_fine,band,err_fem,err_recovered,de_gradient");
  std::getline(slopes, header);
  CHECK(header == "band,quantity,slope");
  CHECK(rep.pairs.size() == 2);
  fs::remove_all(dir);
}

TEST_CASE("bands output is deterministic") {
  RunConfig cfg = parse_config(kMinimal);
  cfg.mesh.N = 6;
  cfg.mesh.L = 2;
  cfg.sweep.K = 3;
  cfg.sweep.m = 3;
  const fs::path a = fs::temp_directory_path() / "edgerec_det_a", b = fs::temp_directory_path() / "edgerec_det_b";
  const auto fa = cmd_bands(cfg, a, 1).file;
  const auto fb = cmd_bands(cfg, b, 2).file;
  std::ifstream ia(fa), ib(fb);
  std::stringstream sa, sb;
  sa << ia.rdbuf();
  sb << ib.rdbuf();
  CHECK(sa.str() == sb.str());
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST_CASE("solving commands refuse a non-definite material") {
  RunConfig cfg = parse_config(R"({"material": {"a0": 0}, "mesh": {"N": 4, "L": 1}})");
  std::ostringstream os;
  CHECK_FALSE(cmd_validate(cfg, os));
  CHECK_THROWS_AS(cmd_bands(cfg, fs::temp_directory_path() / "edgerec_bad", 1), MaterialError);
}
