#pragma once

#include "accelfem/assembly.hpp"
#include "accelfem/linear_solver.hpp"
#include "accelfem/noise.hpp"

#include <memory>
#include <vector>

namespace afem {

struct RecordPolicy {
  enum class Kind { all, terminal, stride };
  Kind kind = Kind::terminal;
  int stride = 1;  ///< for Kind::stride: record at step 0, every `stride` steps and at the end

  static RecordPolicy all() { return {Kind::all, 1}; }
  static RecordPolicy terminal() { return {Kind::terminal, 1}; }
  static RecordPolicy every(int k) { return {Kind::stride, k}; }
  bool records(int step, int steps) const;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<GridFunction> states;
  /// sup over all steps (recorded or not) of |U|_{0,h}
  double sup_norm = 0.0;

  const GridFunction& terminal() const { return states.back(); }
};

/// Implicit Euler-Maruyama for the lattice system
///   (I - dt L_{t+dt}) U_{n+1} = I U_n + dt f_{t+dt} + sum_rho (M^rho_t U_n + g^rho_t) dW^rho_n.
class Stepper {
 public:
  Stepper(AssembledProblem& problem, double dt, const SolverConfig& cfg = {});

  /// Solves I U = phi^h.
  GridFunction initial_state();
  GridFunction step(const GridFunction& u, double t, const NoisePath* noise, int n);

 private:
  const LinearSolver& system(double t_next);

  AssembledProblem* problem_;
  double dt_;
  SolverConfig cfg_;
  std::unique_ptr<LinearSolver> system_;
  double system_time_ = 0.0;
};

GridFunction step_implicit_em(AssembledProblem& problem, const GridFunction& u, double t, double dt,
                              const NoisePath* noise, int n, const SolverConfig& cfg = {});

/// `noise` may be null for a deterministic problem; otherwise noise->steps() must equal `steps`.
Trajectory integrate(AssembledProblem& problem, const NoisePath* noise, double T, int steps,
                     const RecordPolicy& record, const SolverConfig& cfg = {});

/// Solves every level with the same noise path and time grid.
std::vector<Trajectory> integrate_multilevel(std::vector<AssembledProblem*> levels, const NoisePath* noise, double T,
                                             int steps, const RecordPolicy& record, const SolverConfig& cfg = {});

}  // namespace afem
