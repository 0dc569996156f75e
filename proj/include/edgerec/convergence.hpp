#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "edgerec/eigensolver.hpp"
#include "edgerec/material.hpp"
#include "edgerec/mesh.hpp"

namespace edgerec {

class ConvergenceError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct StudyOptions {
  std::vector<int> N_list{16, 32, 64, 128};
  int L = 4;
  double k_par = 0.56 * 3.14159265358979323846;
  int bands = 6;
  Diagonal diagonal = Diagonal::Regular;
  int quad_order = 4;
  EigenOptions solver;
};

/// Errors between two successive meshes, one entry per band.
struct PairErrors {
  int N_coarse = 0;
  int N_fine = 0;
  Eigen::VectorXd err_fem;
  Eigen::VectorXd err_recovered;
  Eigen::VectorXd de_gradient;
};

struct ConvergenceReport {
  std::vector<int> N_list;
  std::vector<Eigen::VectorXd> e_fem;        // per mesh
  std::vector<Eigen::VectorXd> e_recovered;  // per mesh
  std::vector<PairErrors> pairs;
  // Least-squares slopes of log(error) against log(h_coarse), per band;
  // empty when fewer than three meshes were run.
  Eigen::VectorXd slope_fem;
  Eigen::VectorXd slope_recovered;
  Eigen::VectorXd slope_gradient;
};

/// Throws ConvergenceError unless the list has at least two entries, each
/// double the previous one.
void check_nested(const std::vector<int>& N_list);

/// Slope of the least-squares line through (log h, log err).
double fit_slope(const std::vector<double>& h, const std::vector<double>& err);

ConvergenceReport run_study(const DomainWallSpec& spec, const StudyOptions& opts);

}  // namespace edgerec
