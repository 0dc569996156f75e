#pragma once

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include "edgerec/config.hpp"

namespace edgerec {

void write_bands_csv(const BandStructure& bands, std::ostream& os);

/// One row per geometric node in (j, i) order; Dirichlet rows are zero.
void write_mode_csv(const Discretization& d, const ModeField& mode, std::ostream& os);

void write_convergence_csv(const ConvergenceReport& rep, std::ostream& os);
void write_slopes_csv(const ConvergenceReport& rep, std::ostream& os);

/// File name used by cmd_modes, e.g. mode_k2.0944_b20.csv.
std::string mode_file_name(double k_par, int band);

struct BandsOutcome {
  SweepResult result;
  std::filesystem::path file;
  int failed_k = 0;
};

BandsOutcome cmd_bands(const RunConfig& cfg, const std::filesystem::path& out_dir, int threads);

/// Solves at k_par with enough bands for the request and writes one file per band.
std::vector<std::filesystem::path> cmd_modes(const RunConfig& cfg, double k_par,
                                             const std::vector<int>& bands,
                                             const std::filesystem::path& out_dir);

ConvergenceReport cmd_converge(const RunConfig& cfg, const std::vector<int>& N_list,
                               const std::filesystem::path& out_dir);

/// Prints the symmetry report; true when every non-advisory check passes.
bool cmd_validate(const RunConfig& cfg, std::ostream& os);

}  // namespace edgerec
