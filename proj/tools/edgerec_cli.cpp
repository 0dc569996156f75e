#include <cmath>
#include <cstdlib>
#include <iostream>
#include <regex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "edgerec/commands.hpp"

namespace {

// Accepts plain radians or multiples of pi such as "2pi/3" or "0.56pi".
double parse_k(const std::string& s) {
  static const std::regex pi_form(R"(^\s*([-+]?[0-9]*\.?[0-9]*(?:[eE][-+]?[0-9]+)?)\s*\*?\s*pi\s*(?:/\s*([0-9]*\.?[0-9]+))?\s*$)");
  std::smatch m;
  if (std::regex_match(s, m, pi_form)) {
    double a = 1.0;
    if (m[1].length() > 0 && m[1].str() != "+" && m[1].str() != "-") a = std::stod(m[1].str());
    if (m[1].str() == "-") a = -1.0;
    double v = a * M_PI;
    if (m[2].matched) v /= std::stod(m[2].str());
    return v;
  }
  size_t used = 0;
  const double v = std::stod(s, &used);
  if (used != s.size()) throw std::invalid_argument("cannot parse k value '" + s + "'");
  return v;
}

std::vector<int> parse_int_list(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    size_t used = 0;
    const int v = std::stoi(item, &used);
    if (used != item.size()) throw std::invalid_argument("bad integer '" + item + "'");
    out.push_back(v);
  }
  return out;
}

int resolve_threads(int flag) {
  if (flag > 0) return flag;
  if (const char* env = std::getenv("EDGEREC_THREADS")) {
    try {
      const int v = std::stoi(env);
      if (v > 0) return v;
    } catch (const std::exception&) {
    }
    std::cerr << "warning: ignoring EDGEREC_THREADS='" << env << "'\n";
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

struct Args {
  std::string config;
  std::string k;
  std::string bands;
  std::string n_list;
  std::string out;
  int threads = 0;
};

void add_common(CLI::App* cmd, Args& a) {
  cmd->add_option("--config", a.config, "JSON run configuration")->required()->check(CLI::ExistingFile);
  cmd->add_option("--k", a.k, "parallel quasi-momentum (radians, or e.g. 2pi/3)");
  cmd->add_option("--bands", a.bands, "comma separated 1-based band indices");
  cmd->add_option("--n-list", a.n_list, "comma separated mesh sizes, each double the last");
  cmd->add_option("--out", a.out, "output directory (overrides output.directory)");
  cmd->add_option("--threads", a.threads, "worker threads (fallback: EDGEREC_THREADS)")
      ->check(CLI::PositiveNumber);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Edge modes of domain-wall modulated photonic graphene"};
  app.require_subcommand(1);
  Args a;
  auto* bands = app.add_subcommand("bands", "sweep k_par and classify bands");
  auto* modes = app.add_subcommand("modes", "write eigenfunctions at one k_par");
  auto* converge = app.add_subcommand("converge", "mesh refinement study");
  auto* validate = app.add_subcommand("validate", "check the material symmetry conditions");
  for (auto* c : {bands, modes, converge, validate}) add_common(c, a);
  CLI11_PARSE(app, argc, argv);

  try {
    const edgerec::RunConfig cfg = edgerec::load_config(a.config);
    const std::filesystem::path out = a.out.empty() ? cfg.output.directory : a.out;

    if (bands->parsed()) {
      const auto res = edgerec::cmd_bands(cfg, out, resolve_threads(a.threads));
      std::cout << "wrote " << res.file.string() << "\n";
      for (const auto& pr : res.result.bands.probes) {
        std::cout << "k_par " << pr.k_par << ":";
        for (size_t b = 0; b < pr.classes.size(); ++b) {
          if (pr.classes[b] == edgerec::BandClass::Edge ||
              pr.classes[b] == edgerec::BandClass::PseudoEdge) {
            std::cout << " " << (b + 1) << "=" << edgerec::to_string(pr.classes[b]);
          }
        }
        std::cout << "\n";
      }
      if (res.failed_k > 0) {
        for (size_t j = 0; j < res.result.bands.errors.size(); ++j) {
          const auto& e = res.result.bands.errors[j];
          if (!e.empty()) std::cerr << "k_index " << j << ": " << e << "\n";
        }
        return 2;
      }
    } else if (modes->parsed()) {
      const double k = a.k.empty() ? (cfg.sweep.probe_k.empty() ? 2.0 * M_PI / 3.0
                                                                 : cfg.sweep.probe_k.front())
                                   : parse_k(a.k);
      std::vector<int> list = parse_int_list(a.bands);
      if (list.empty()) {
        for (int b = 1; b <= cfg.sweep.m; ++b) list.push_back(b);
      }
      for (const auto& f : edgerec::cmd_modes(cfg, k, list, out)) {
        std::cout << "wrote " << f.string() << "\n";
      }
    } else if (converge->parsed()) {
      const auto rep = edgerec::cmd_converge(cfg, parse_int_list(a.n_list), out);
      std::cout << "wrote " << (out / "convergence.csv").string() << "\n";
      if (rep.slope_fem.size() > 0) {
        std::cout << "band  fem  recovered  gradient\n";
        for (Eigen::Index b = 0; b < rep.slope_fem.size(); ++b) {
          std::cout << b + 1 << "  " << rep.slope_fem(b) << "  " << rep.slope_recovered(b) << "  "
                    << rep.slope_gradient(b) << "\n";
        }
      } else {
        std::cout << "fewer than three meshes: no slopes fitted\n";
      }
    } else if (validate->parsed()) {
      return edgerec::cmd_validate(cfg, std::cout) ? 0 : 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
