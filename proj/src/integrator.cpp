#include "accelfem/integrator.hpp"

#include <cmath>

namespace afem {

bool RecordPolicy::records(int step, int steps) const {
  switch (kind) {
    case Kind::all: return true;
    case Kind::terminal: return step == steps;
    case Kind::stride: return step == 0 || step == steps || step % stride == 0;
  }
  return false;
}

Stepper::Stepper(AssembledProblem& problem, double dt, const SolverConfig& cfg)
    : problem_(&problem), dt_(dt), cfg_(cfg) {
  if (!(dt > 0.0)) throw InputError("time step must be positive");
}

const LinearSolver& Stepper::system(double t_next) {
  if (!system_ || (problem_->drift_time_dependent() && system_time_ != t_next)) {
    const StencilOperator a = StencilOperator::combine(1.0, problem_->mass(), -dt_, problem_->drift(t_next));
    system_ = std::make_unique<LinearSolver>(a.to_sparse(), cfg_);
    system_time_ = t_next;
  }
  return *system_;
}

GridFunction Stepper::initial_state() {
  const LinearSolver mass(problem_->mass().to_sparse(), cfg_);
  return GridFunction(problem_->lattice(), mass.solve(problem_->initial_data().values));
}

GridFunction Stepper::step(const GridFunction& u, double t, const NoisePath* noise, int n) {
  const double t_next = t + dt_;
  const ProblemSpec& p = problem_->problem();
  Eigen::VectorXd rhs = problem_->mass().apply(u.values);
  if (!p.f.is_zero()) rhs += dt_ * problem_->f(t_next).values;
  if (noise && p.has_noise()) {
    for (int rho = 0; rho < p.rho_max && rho < noise->rho_count(); ++rho) {
      const double dw = noise->increment(rho, n);
      Eigen::VectorXd term = problem_->noise(t, rho).apply(u.values);
      if (!p.g[rho].is_zero()) term += problem_->g(t, rho).values;
      rhs += dw * term;
    }
  }
  GridFunction next(problem_->lattice(), system(t_next).solve(rhs));
  if (!next.values.allFinite()) throw NumericalError("non-finite state after step " + std::to_string(n + 1));
  return next;
}

GridFunction step_implicit_em(AssembledProblem& problem, const GridFunction& u, double t, double dt,
                              const NoisePath* noise, int n, const SolverConfig& cfg) {
  Stepper stepper(problem, dt, cfg);
  return stepper.step(u, t, noise, n);
}

Trajectory integrate(AssembledProblem& problem, const NoisePath* noise, double T, int steps,
                     const RecordPolicy& record, const SolverConfig& cfg) {
  if (steps < 1) throw InputError("need at least one time step");
  if (!(T > 0.0)) throw InputError("final time must be positive");
  if (noise && noise->steps() != steps) throw InputError("noise path length does not match the step count");
  if (problem.problem().has_noise() && !noise) throw InputError("stochastic problem needs a noise path");
  const double dt = T / steps;
  Stepper stepper(problem, dt, cfg);
  Trajectory traj;
  GridFunction u = stepper.initial_state();
  traj.sup_norm = norm_0h(u);
  if (record.records(0, steps)) {
    traj.times.push_back(0.0);
    traj.states.push_back(u);
  }
  for (int n = 0; n < steps; ++n) {
    const double t = n * dt;
    try {
      u = stepper.step(u, t, noise, n);
    } catch (const SolverError& e) {
      throw SolverError("step " + std::to_string(n + 1) + ": " + e.what(), e.residual());
    } catch (const NumericalError& e) {
      throw NumericalError("step " + std::to_string(n + 1) + ": " + e.what());
    }
    traj.sup_norm = std::max(traj.sup_norm, norm_0h(u));
    if (record.records(n + 1, steps)) {
      traj.times.push_back(n + 1 == steps ? T : (n + 1) * dt);
      traj.states.push_back(u);
    }
  }
  return traj;
}

std::vector<Trajectory> integrate_multilevel(std::vector<AssembledProblem*> levels, const NoisePath* noise, double T,
                                             int steps, const RecordPolicy& record, const SolverConfig& cfg) {
  if (levels.empty()) throw InputError("need at least one level");
  for (std::size_t j = 1; j < levels.size(); ++j) {
    if (levels[j - 1]->lattice().levels_to(levels[j]->lattice()) != 1)
      throw InputError("levels must be successive halvings of the coarsest lattice");
  }
  std::vector<Trajectory> out;
  out.reserve(levels.size());
  for (auto* level : levels) out.push_back(integrate(*level, noise, T, steps, record, cfg));
  return out;
}

}  // namespace afem
