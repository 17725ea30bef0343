#pragma once

#include "accelfem/integrator.hpp"
#include "accelfem/richardson.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace afem {

enum class ReferencePolicy {
  spectral,  ///< Fourier collocation on the reference lattice (d = 1)
  fine,      ///< lattice solve ref_levels halvings below the finest ladder mesh
};

struct ConvergenceConfig {
  std::vector<int> ladder{16, 32, 64, 128};
  int jbar = 1;
  double ratio = 0.25;
  double length = 0.0;
  double T = 0.5;
  int records = 10;        ///< recorded times besides t = 0
  double dt_factor = 0.5;  ///< dt = dt_factor * h_ref^2 unless steps > 0
  int steps = 0;
  ReferencePolicy reference = ReferencePolicy::fine;
  int ref_levels = 2;
  int samples = 1;
  std::uint64_t seed = 1;
  SolverConfig solver;
  int quad_degree = 8;
  double signed_h = 1.0;   ///< sign applied to every lattice spacing
};

/// Reference lattice size: finest ladder mesh times 2^ref_levels.
int reference_sites(const ConvergenceConfig& cfg);
/// Step count from the dt rule, rounded up to a multiple of cfg.records.
int convergence_steps(const ConvergenceConfig& cfg);

struct ConvergenceResult {
  ConvergenceReport base;
  ConvergenceReport mixture;
  ExtrapolationPlan<double> plan;
  int steps = 0;
  double dt = 0.0;
  int reference_n = 0;
  int samples_done = 0;
  bool complete = false;
  std::string failure;
  /// Per ladder level: sup_t |.|^2 of each sample.
  std::vector<std::vector<double>> base_sq, mixture_sq;
};

/// For every ladder mesh n: base error of u^{L/n} and error of the mixture
/// sum_j c_j u^{L/(n 2^j)}, both as sup over recorded times of |.|_{0,h},
/// RMS over samples. Each sample shares one noise path across all levels and
/// the reference. On failure the rows from completed samples are kept and
/// `failure` is set.
ConvergenceResult run_convergence(const FiniteElement& element, const ProblemSpec& problem,
                                  const ConvergenceConfig& cfg);

}  // namespace afem
