#include "accelfem/linear_solver.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseLU>

#include <cmath>

namespace afem {

struct LinearSolver::Impl {
  Eigen::SparseMatrix<double> a;
  SolverConfig cfg;
  std::unique_ptr<Eigen::SparseLU<Eigen::SparseMatrix<double>>> lu;
  std::unique_ptr<Eigen::BiCGSTAB<Eigen::SparseMatrix<double>, Eigen::IncompleteLUT<double>>> krylov;
};

LinearSolver::LinearSolver(const Eigen::SparseMatrix<double>& a, const SolverConfig& cfg)
    : impl_(std::make_unique<Impl>()) {
  if (a.rows() != a.cols()) throw InputError("linear system is not square");
  impl_->a = a;
  impl_->a.makeCompressed();
  impl_->cfg = cfg;
  bool zero = true;
  for (Index k = 0; k < impl_->a.nonZeros() && zero; ++k) zero = impl_->a.valuePtr()[k] == 0.0;
  if (zero && a.rows() > 0) throw SolverError("linear system matrix is zero", 1.0);

  if (a.rows() <= cfg.direct_threshold) {
    impl_->lu = std::make_unique<Eigen::SparseLU<Eigen::SparseMatrix<double>>>();
    impl_->lu->compute(impl_->a);
    if (impl_->lu->info() != Eigen::Success)
      throw SolverError("sparse LU factorisation failed: matrix is singular", 1.0);
  } else {
    impl_->krylov = std::make_unique<Eigen::BiCGSTAB<Eigen::SparseMatrix<double>, Eigen::IncompleteLUT<double>>>();
    impl_->krylov->setTolerance(cfg.tol);
    impl_->krylov->setMaxIterations(cfg.max_iter);
    impl_->krylov->compute(impl_->a);
    if (impl_->krylov->info() != Eigen::Success) throw SolverError("preconditioner setup failed", 1.0);
  }
}

LinearSolver::~LinearSolver() = default;
LinearSolver::LinearSolver(LinearSolver&&) noexcept = default;
LinearSolver& LinearSolver::operator=(LinearSolver&&) noexcept = default;

bool LinearSolver::direct() const { return static_cast<bool>(impl_->lu); }

Eigen::VectorXd LinearSolver::solve(const Eigen::VectorXd& rhs) const {
  if (rhs.size() != impl_->a.rows()) throw InputError("right-hand side has the wrong size");
  const double bnorm = rhs.norm();
  if (bnorm == 0.0) return Eigen::VectorXd::Zero(rhs.size());
  Eigen::VectorXd x = impl_->lu ? Eigen::VectorXd(impl_->lu->solve(rhs)) : Eigen::VectorXd(impl_->krylov->solve(rhs));
  const double residual = (impl_->a * x - rhs).norm() / bnorm;
  if (!std::isfinite(residual) || residual > impl_->cfg.tol) {
    throw SolverError("linear solve did not reach tolerance: relative residual " + std::to_string(residual),
                      residual);
  }
  return x;
}

Eigen::VectorXd solve_linear(const Eigen::SparseMatrix<double>& a, const Eigen::VectorXd& rhs,
                             const SolverConfig& cfg) {
  return LinearSolver(a, cfg).solve(rhs);
}

}  // namespace afem
