#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bstokes/precond.hpp"

namespace bstokes {

enum class Study : int {
  Convergence = 0,
  NaiveCompare = 1,
  BcStudy = 2,
  Sweep = 3,
  DiagCompare = 4,
  Enclosed = 5
};

const char* to_string(Study s);
Study study_from_string(const std::string& name);

struct ExperimentConfig {
  Study study = Study::Convergence;
  BcConfig bc = BcConfig::StressPressure;
  std::vector<int> levels;  // log2(1/h), ascending
  Params base;
  std::vector<double> grid_mu_f, grid_kappa, grid_lambda, grid_alpha, grid_gamma;
  std::vector<PrecondKind> preconds;
  double rtol = 1e-8;
  int maxit = 750;
  std::uint64_t seed = 0;
  int enclosed_n = 8;  // base resolution of the enclosed-disk geometry
  std::string out;

  void validate() const;  // throws on empty grids / unsorted levels
};

ExperimentConfig default_config(Study study);

// Merges `key = value` lines from a config file into the defaults for its
// study; CLI-style overrides go through the public fields afterwards.
ExperimentConfig load_config(const std::string& path);

// Each study returns the full CSV text (metadata comment block + header +
// rows, deterministically ordered by grid keys).
std::string run_convergence(const ExperimentConfig& cfg);
std::string run_naive_compare(const ExperimentConfig& cfg);
std::string run_bc_study(const ExperimentConfig& cfg);
std::string run_sweep(const ExperimentConfig& cfg);
std::string run_diag_compare(const ExperimentConfig& cfg);
std::string run_enclosed(const ExperimentConfig& cfg);

std::string run_study(const ExperimentConfig& cfg);

// Scientific notation with six significant digits, '.' decimal separator.
std::string fmt_sci(double v);

// Boundary-variant pairing used throughout the studies: strong Dirichlet
// where the interface meets essential velocity/displacement boundaries, the
// shifted Neumann operator where it meets natural ones or closes on itself.
FracBc default_fractional_variant(BcConfig bc);

}  // namespace bstokes
