#pragma once

#include "accelfem/problem.hpp"
#include "accelfem/tensors.hpp"

#include <map>
#include <string>
#include <vector>

namespace afem {

struct SymbolMinimum {
  double value = 0.0;
  Point theta;
};

/// Minimum over theta in [0, 2 pi)^d of S(theta) = sum_lambda R_lambda cos(lambda . theta):
/// grid search with `grid_points_per_axis` points per axis, then a shrinking
/// pattern search from the best grid point. Throws NumericalError when
/// |sum R_lambda sin(lambda . theta)| > 1e-12 anywhere on the grid.
SymbolMinimum symbol_minimum(const ReferenceTensors& tensors, int grid_points_per_axis);
double check_invertibility(const ReferenceTensors& tensors, int grid_points_per_axis = 0);

/// One identity of the compatibility conditions, e.g. "sum lambda_1 R^1".
struct IdentityCheck {
  std::string family;
  std::string label;
  double target = 0.0;
  double computed = 0.0;
  double residual() const { return std::abs(computed - target); }
};

/// Families: mass_sum, stiffness_sum, first_moment, second_moment, q_sum, qtilde_sum.
std::vector<IdentityCheck> compatibility_identities(const ReferenceTensors& tensors);
/// Max residual per family.
std::map<std::string, double> check_compatibility(const ReferenceTensors& tensors);

/// psi(0) = 1 and psi(lambda) = 0 at every other integer point of the bounding box.
bool check_cardinal(const FiniteElement& element, double tol = 1e-12);

struct ParabolicityResult {
  double kappa = 0.0;  ///< min eigenvalue of a - sigma sigma^T / 2 over the samples
  Point x;
  double t = 0.0;
};

/// Samples (t, x) on a grid over [0, T] x [0, L)^d with about `sample_points`
/// spatial points and `t_samples` times. Can refute parabolicity, never prove it.
ParabolicityResult check_parabolicity(const ProblemSpec& problem, double length, double T, int sample_points,
                                      int t_samples);

struct AssumptionReport {
  std::string element;
  bool symmetry_ok = false;
  double symmetry_defect = 0.0;
  double integral = 0.0;       ///< int psi
  double continuity_defect = 0.0;
  double delta_estimate = 0.0;
  std::map<std::string, double> compatibility_residuals;
  std::vector<IdentityCheck> details;
  bool cardinal_ok = false;

  double delta_threshold = 1e-8;
  double tolerance = 1e-10;

  bool normalisation_ok() const { return std::abs(integral - 1.0) < tolerance; }
  bool continuity_ok() const { return continuity_defect < 1e-12; }
  bool invertibility_ok() const { return delta_estimate > delta_threshold; }
  bool compatibility_ok() const;
  bool pass() const;
  /// Columns: identity, target, computed, residual, verdict.
  std::string table() const;
};

AssumptionReport verify_element(const FiniteElement& element, int quad_degree = 8, int grid_points_per_axis = 0);

}  // namespace afem
