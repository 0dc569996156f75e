#pragma once

#include <optional>
#include <string>
#include <vector>

#include "edgerec/assembly.hpp"
#include "edgerec/eigensolver.hpp"
#include "edgerec/mesh.hpp"
#include "edgerec/recovery.hpp"

namespace edgerec {

/// Everything built once per (material, mesh): mesh, maps, recovery
/// matrices, weight samples and the k-independent sparse forms.
struct Discretization {
  CylinderMesh mesh;
  DofMap map;
  std::vector<NodePatch> patches;
  RecoveryOperator recovery;
  WeightField weight;
  MatrixSet matrices;
  Eigen::VectorXd lumped_mass;  // row sums of M_periodic
};

Discretization build_discretization(const DomainWallSpec& spec, int N, int L,
                                    Diagonal diagonal = Diagonal::Regular, int quad_order = 4);

/// int e^H W e over the strip, e = grad(p_h) - G_h p_h, with grad(p_h)
/// elementwise constant and G_h p_h the P1 interpolant of the recovered
/// nodal gradient. u and grad live on periodic nodes.
double correction_norm(const CylinderMesh& mesh, const DofMap& map, const WeightField& weight,
                       const CVec& u, const RecoveredGradient& grad);

/// E_fem - corr.
double recovered_eigenvalue(double e_fem, double corr);

/// One eigenfunction with its recovered gradient.
struct ModeField {
  double k_par = 0.0;
  int band = 0;              // 1-based
  double e_fem = 0.0;
  double e_recovered = 0.0;
  CVec dofs;                 // M-normalized
  CVec nodal;                // periodic nodes, zero on Dirichlet rows
  RecoveredGradient gradient;
};

ModeField make_mode_field(const Discretization& d, const CVec& dofs, double k_par, int band,
                          double e_fem);

struct Localization {
  double center_fraction = 0.0;    // |tau2| < L/3
  double boundary_fraction = 0.0;  // |tau2| > 2L/3
};

/// Lumped-mass fractions of |p|^2 in the center and boundary thirds.
Localization localization_profile(const Discretization& d, const CVec& nodal);

/// |p| at every geometric node, grid-ordered (j outer, i inner).
std::vector<double> modulus_grid(const Discretization& d, const CVec& nodal);

enum class BandClass { Bulk, Edge, PseudoEdge, Unclassified };
const char* to_string(BandClass c);

struct ClassifyOptions {
  double theta_center = 0.8;
  double theta_boundary = 0.8;
  double theta_gap = 0.5;
  double window = 0.39269908169872414;  // pi / 8
};

/// Eigenvalues of one k solve, FEM order.
struct KSolution {
  double k_par = 0.0;
  Eigen::VectorXd e_fem;
  Eigen::VectorXd e_recovered;
  Eigen::VectorXd correction;
  Eigen::VectorXd residuals;
  std::optional<Eigen::MatrixXcd> vectors;  // kept only when requested
  std::string error;                        // non-empty when the solve failed
  bool ok() const { return error.empty(); }
};

KSolution solve_at_k(const Discretization& d, double k_par, const EigenOptions& opts,
                     bool keep_vectors);

struct ProbeResult {
  double k_par = 0.0;
  int k_index = 0;
  std::vector<Localization> localization;  // per band
  std::vector<BandClass> classes;          // per band
  std::vector<double> min_gap;             // per band, over the window
  double mean_spacing = 0.0;
};

/// Per (k, band) raw and recovered eigenvalues on the merged k grid
/// (linspace(0, 2 pi, K) plus off-grid probe momenta), with classification
/// at each probe.
struct BandStructure {
  std::vector<double> k_grid;
  std::vector<int> probe_of_k;   // probe index at that k, or -1
  Eigen::MatrixXd e_fem;         // k x band, NaN where a solve failed
  Eigen::MatrixXd e_recovered;
  std::vector<std::string> errors;  // per k
  std::vector<ProbeResult> probes;
  int bands() const { return static_cast<int>(e_fem.cols()); }
};

/// Isolation and localization labels at one probe. `fields` holds one mode
/// per band at the probe momentum.
ProbeResult classify_bands(const BandStructure& bands, int probe_k_index,
                           const std::vector<Localization>& fields, const ClassifyOptions& opts);

struct SweepOptions {
  int N = 32;
  int L = 10;
  Diagonal diagonal = Diagonal::Regular;
  int quad_order = 4;
  int K = 33;
  std::vector<double> probes;
  EigenOptions solver;
  ClassifyOptions classify;
  int threads = 1;
};

struct SweepResult {
  BandStructure bands;
  std::vector<std::vector<ModeField>> probe_fields;  // per probe, per band
};

/// Assemble once, then for every k: form S, solve, recover gradients, and
/// correct the eigenvalues. Solver failures are kept per k.
SweepResult sweep(const DomainWallSpec& spec, const SweepOptions& opts);
SweepResult sweep(const Discretization& d, const SweepOptions& opts);

/// Merged, sorted k list and probe lookup.
std::vector<double> merged_k_grid(int K, const std::vector<double>& probes,
                                  std::vector<int>& probe_of_k);

}  // namespace edgerec
