#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "edgerec/convergence.hpp"
#include "edgerec/material.hpp"
#include "edgerec/spectrum.hpp"

namespace edgerec {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct MeshConfig {
  int N = 32;
  int L = 10;
  Diagonal diagonal = Diagonal::Regular;
  int quad_order = 4;
};

struct SweepConfig {
  int K = 33;
  int m = 25;
  std::vector<double> probe_k{2.0943951023931953, 4.1887902047863905};
};

struct ConvergenceConfig {
  std::vector<int> N_list{16, 32, 64, 128};
  double k_par = 0.56 * 3.14159265358979323846;
  int bands = 6;
};

struct OutputConfig {
  std::string directory = "out";
  bool write_mesh = false;
  bool write_matrices = false;
};

struct RunConfig {
  DomainWallSpec material;
  MeshConfig mesh;
  SweepConfig sweep;
  EigenOptions solver;
  ClassifyOptions classify;
  ConvergenceConfig convergence;
  OutputConfig output;
};

/// Parse and validate a JSON config. Missing sections take defaults except
/// `material`, which is required; unknown keys are rejected.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

SweepOptions sweep_options(const RunConfig& cfg, int threads);
StudyOptions study_options(const RunConfig& cfg);

}  // namespace edgerec
