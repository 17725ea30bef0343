#pragma once

#include "accelfem/types.hpp"

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include <memory>

namespace afem {

struct SolverConfig {
  double tol = 1e-10;          ///< relative residual
  int max_iter = 2000;
  Index direct_threshold = 4096;  ///< sparse LU up to this many unknowns
};

class SolverError : public NumericalError {
 public:
  SolverError(const std::string& what, double residual) : NumericalError(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

/// Factor once, solve many times. Sparse LU for small systems, BiCGSTAB with
/// an incomplete-LU preconditioner above the threshold.
class LinearSolver {
 public:
  explicit LinearSolver(const Eigen::SparseMatrix<double>& a, const SolverConfig& cfg = {});
  ~LinearSolver();
  LinearSolver(LinearSolver&&) noexcept;
  LinearSolver& operator=(LinearSolver&&) noexcept;

  Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const;
  bool direct() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

Eigen::VectorXd solve_linear(const Eigen::SparseMatrix<double>& a, const Eigen::VectorXd& rhs,
                             const SolverConfig& cfg = {});

}  // namespace afem
