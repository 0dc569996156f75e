#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "edgerec/commands.hpp"
#include "edgerec/config.hpp"

namespace py = pybind11;
using namespace edgerec;

namespace {

py::dict probe_dict(const ProbeResult& p) {
  py::list classes, center, boundary;
  for (size_t b = 0; b < p.classes.size(); ++b) {
    classes.append(to_string(p.classes[b]));
    center.append(p.localization[b].center_fraction);
    boundary.append(p.localization[b].boundary_fraction);
  }
  py::dict d;
  d["k_par"] = p.k_par;
  d["k_index"] = p.k_index;
  d["classes"] = classes;
  d["center_fraction"] = center;
  d["boundary_fraction"] = boundary;
  d["min_gap"] = p.min_gap;
  d["mean_spacing"] = p.mean_spacing;
  return d;
}

py::dict bands_dict(const BandStructure& b) {
  py::list probes;
  for (const ProbeResult& p : b.probes) probes.append(probe_dict(p));
  py::dict d;
  d["k"] = b.k_grid;
  d["e_fem"] = b.e_fem;
  d["e_recovered"] = b.e_recovered;
  d["errors"] = b.errors;
  d["probes"] = probes;
  return d;
}

py::dict report_dict(const ConvergenceReport& r) {
  py::list pairs;
  for (const PairErrors& p : r.pairs) {
    py::dict d;
    d["N_coarse"] = p.N_coarse;
    d["N_fine"] = p.N_fine;
    d["err_fem"] = p.err_fem;
    d["err_recovered"] = p.err_recovered;
    d["de_gradient"] = p.de_gradient;
    pairs.append(d);
  }
  py::dict d;
  d["N_list"] = r.N_list;
  d["e_fem"] = r.e_fem;
  d["e_recovered"] = r.e_recovered;
  d["pairs"] = pairs;
  d["slope_fem"] = r.slope_fem;
  d["slope_recovered"] = r.slope_recovered;
  d["slope_gradient"] = r.slope_gradient;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Bloch finite elements with gradient recovery for honeycomb edge states";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<MaterialError>(m, "MaterialError", PyExc_ValueError);
  py::register_exception<ConvergenceError>(m, "ConvergenceError", PyExc_ValueError);
  py::register_exception<EigenSolverError>(m, "EigenSolverError", PyExc_RuntimeError);

  py::class_<MeshConfig>(m, "MeshConfig")
      .def_readwrite("N", &MeshConfig::N)
      .def_readwrite("L", &MeshConfig::L)
      .def_readwrite("quad_order", &MeshConfig::quad_order);
  py::class_<SweepConfig>(m, "SweepConfig")
      .def_readwrite("K", &SweepConfig::K)
      .def_readwrite("m", &SweepConfig::m)
      .def_readwrite("probe_k", &SweepConfig::probe_k);
  py::class_<ConvergenceConfig>(m, "ConvergenceConfig")
      .def_readwrite("N_list", &ConvergenceConfig::N_list)
      .def_readwrite("k_par", &ConvergenceConfig::k_par)
      .def_readwrite("bands", &ConvergenceConfig::bands);
  py::class_<EigenOptions>(m, "EigenOptions")
      .def_readwrite("m", &EigenOptions::m)
      .def_readwrite("tol", &EigenOptions::tol)
      .def_readwrite("max_iter", &EigenOptions::max_iter)
      .def_readwrite("seed", &EigenOptions::seed)
      .def_readwrite("block", &EigenOptions::block)
      .def_readwrite("subspace", &EigenOptions::subspace);
  py::class_<ClassifyOptions>(m, "ClassifyOptions")
      .def_readwrite("theta_center", &ClassifyOptions::theta_center)
      .def_readwrite("theta_boundary", &ClassifyOptions::theta_boundary)
      .def_readwrite("theta_gap", &ClassifyOptions::theta_gap)
      .def_readwrite("window", &ClassifyOptions::window);
  py::class_<RunConfig>(m, "RunConfig")
      .def_readwrite("mesh", &RunConfig::mesh)
      .def_readwrite("sweep", &RunConfig::sweep)
      .def_readwrite("solver", &RunConfig::solver)
      .def_readwrite("classify", &RunConfig::classify)
      .def_readwrite("convergence", &RunConfig::convergence)
      .def_property(
          "delta", [](const RunConfig& c) { return c.material.delta; },
          [](RunConfig& c, double v) { c.material.delta = v; })
      .def_property(
          "a0", [](const RunConfig& c) { return c.material.bulk.a0; },
          [](RunConfig& c, double v) { c.material.bulk.a0 = v; });

  m.def("load_config", &load_config, py::arg("path"), "Load and validate a JSON run configuration.");
  m.def("parse_config", &parse_config, py::arg("text"), "Parse a JSON run configuration string.");

  m.def(
      "validate",
      [](const RunConfig& cfg) {
        std::ostringstream os;
        const bool ok = cmd_validate(cfg, os);
        return py::make_tuple(ok, os.str());
      },
      py::arg("config"), "Symmetry report for the material; returns (passed, text).");

  m.def(
      "bands",
      [](const RunConfig& cfg, int threads) {
        SweepResult r;
        {
          py::gil_scoped_release release;
          r = sweep(cfg.material, sweep_options(cfg, threads));
        }
        return bands_dict(r.bands);
      },
      py::arg("config"), py::arg("threads") = 1,
      "Band sweep over the configured k grid with classification at the probe momenta.");

  m.def(
      "solve",
      [](const RunConfig& cfg, double k_par, int m_bands) {
        KSolution s;
        {
          py::gil_scoped_release release;
          const Discretization d =
              build_discretization(cfg.material, cfg.mesh.N, cfg.mesh.L, cfg.mesh.diagonal, cfg.mesh.quad_order);
          EigenOptions o = cfg.solver;
          o.m = m_bands;
          s = solve_at_k(d, k_par, o, false);
        }
        if (!s.ok()) throw EigenSolverError(s.error);
        py::dict d;
        d["e_fem"] = s.e_fem;
        d["e_recovered"] = s.e_recovered;
        d["correction"] = s.correction;
        d["residuals"] = s.residuals;
        return d;
      },
      py::arg("config"), py::arg("k_par"), py::arg("bands"),
      "Raw and recovered eigenvalues at one momentum.");

  m.def(
      "modes",
      [](const RunConfig& cfg, double k_par, const std::vector<int>& bands, const std::filesystem::path& out) {
        py::gil_scoped_release release;
        return cmd_modes(cfg, k_par, bands, out);
      },
      py::arg("config"), py::arg("k_par"), py::arg("bands"), py::arg("out_dir"),
      "Write mode CSV files; returns their paths.");

  m.def(
      "converge",
      [](const RunConfig& cfg, const std::vector<int>& N_list) {
        ConvergenceReport r;
        {
          py::gil_scoped_release release;
          StudyOptions o = study_options(cfg);
          if (!N_list.empty()) o.N_list = N_list;
          r = run_study(cfg.material, o);
        }
        return report_dict(r);
      },
      py::arg("config"), py::arg("N_list") = std::vector<int>{},
      "Nested-mesh convergence study.");

  m.def(
      "mesh",
      [](int N, int L) {
        const CylinderMesh mesh = build_mesh(N, L);
        Eigen::MatrixXd nodes(mesh.nodes.size(), 4);
        std::vector<std::string> cls;
        for (size_t k = 0; k < mesh.nodes.size(); ++k) {
          const MeshNode& n = mesh.nodes[k];
          nodes.row(k) << n.tau1, n.tau2, n.x(0), n.x(1);
          cls.push_back(to_string(n.cls));
        }
        Eigen::MatrixXi tris(mesh.triangles.size(), 3);
        for (size_t t = 0; t < mesh.triangles.size(); ++t)
          tris.row(t) << mesh.triangles[t][0], mesh.triangles[t][1], mesh.triangles[t][2];
        py::dict d;
        d["nodes"] = nodes;
        d["classes"] = cls;
        d["triangles"] = tris;
        d["n_dof"] = build_dof_map(mesh).n_dof();
        return d;
      },
      py::arg("N"), py::arg("L"),
      "Strip mesh: node table (tau1, tau2, x, y), node classes, triangles and dof count.");
}
