#pragma once

#include "accelfem/lattice.hpp"
#include "accelfem/problem.hpp"
#include "accelfem/tensors.hpp"

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace afem {

/// phi -> sum_mu coeffs(x, mu) phi(x + h mu), offsets mu in lattice units,
/// wrapping periodically.
class StencilOperator {
 public:
  StencilOperator() = default;
  StencilOperator(const TorusLattice& lattice, std::vector<IntVec> offsets, Eigen::MatrixXd coeffs,
                  double time = 0.0);

  const TorusLattice& lattice() const { return lattice_; }
  const std::vector<IntVec>& offsets() const { return offsets_; }
  /// sites x offsets
  const Eigen::MatrixXd& coeffs() const { return coeffs_; }
  double time() const { return time_; }

  Eigen::VectorXd apply(const Eigen::VectorXd& u) const;
  GridFunction apply(const GridFunction& u) const;

  Eigen::SparseMatrix<double> to_sparse() const;
  Eigen::MatrixXd to_dense() const;

  /// alpha * A + beta * B on identical lattice and offsets.
  static StencilOperator combine(double alpha, const StencilOperator& a, double beta, const StencilOperator& b);

  /// Columns: site, offset components, coefficient.
  std::string to_csv() const;

  friend bool operator==(const StencilOperator& a, const StencilOperator& b);

 private:
  TorusLattice lattice_;
  std::vector<IntVec> offsets_;
  Eigen::MatrixXd coeffs_;
  Eigen::Matrix<Index, Eigen::Dynamic, Eigen::Dynamic> neighbours_;
  double time_ = 0.0;
};

/// Assembly inputs. `h` may be negative: integrands are sampled at x + h z and
/// the stencil for lattice offset mu comes from the tensor offset sign(h) mu,
/// while the lattice itself always has spacing |h|.
struct Discretisation {
  const ElementRules* rules = nullptr;
  TorusLattice lattice;
  double h = 0.0;

  Discretisation(const ElementRules& r, const TorusLattice& l, double signed_h);
};

/// I^h: coefficient R_lambda at every site.
StencilOperator assemble_mass(const Discretisation& disc, const ReferenceTensors& tensors);
/// L^h_t: A/h^2 + B/h + C.
StencilOperator assemble_drift(const Discretisation& disc, const ProblemSpec& problem, double t);
/// M^{h,rho}_t: S/h + N.
StencilOperator assemble_noise(const Discretisation& disc, const ProblemSpec& problem, double t, int rho);
/// phi^h(x) = int phi(x + h z) psi(z) dz
GridFunction mollify(const Discretisation& disc, const Expr& field, double t);

/// Operators and data of one lattice problem; time-independent pieces are
/// assembled once.
class AssembledProblem {
 public:
  AssembledProblem(const ElementRules& rules, const ReferenceTensors& tensors, const ProblemSpec& problem,
                   const TorusLattice& lattice, double signed_h);

  const TorusLattice& lattice() const { return disc_.lattice; }
  const ProblemSpec& problem() const { return *problem_; }
  double signed_h() const { return disc_.h; }

  const StencilOperator& mass() const { return mass_; }
  const StencilOperator& drift(double t);
  const StencilOperator& noise(double t, int rho);
  GridFunction f(double t);
  GridFunction g(double t, int rho);
  const GridFunction& initial_data() const { return phi_h_; }

  bool drift_time_dependent() const { return problem_->drift_depends_on_time(); }

 private:
  Discretisation disc_;
  const ProblemSpec* problem_;
  StencilOperator mass_;
  GridFunction phi_h_;
  std::optional<StencilOperator> drift_;
  std::vector<std::optional<StencilOperator>> noise_;
  std::optional<GridFunction> f_;
  std::vector<std::optional<GridFunction>> g_;
};

}  // namespace afem
