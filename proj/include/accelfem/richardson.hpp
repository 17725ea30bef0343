#pragma once

#include "accelfem/lattice.hpp"

#include <Eigen/Core>
#include <Eigen/LU>
#include <Eigen/SVD>

#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace afem {

template <typename Scalar = double>
struct ExtrapolationPlan {
  int jbar = 0;
  Scalar ratio = Scalar(0.25);
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> c;
  Scalar residual = 0;  ///< max |V c - e_0|
  /// 2-norm condition number of V; NaN unless jbar > 6.
  Scalar condition = std::numeric_limits<Scalar>::quiet_NaN();
};

/// V_{kj} = ratio^{k j}, k, j = 0..jbar
template <typename Scalar = double>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> extrapolation_matrix(int jbar, Scalar ratio) {
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> v(jbar + 1, jbar + 1);
  for (int k = 0; k <= jbar; ++k)
    for (int j = 0; j <= jbar; ++j) v(k, j) = std::pow(ratio, Scalar(k * j));
  return v;
}

/// Solves sum_j c_j = 1, sum_j c_j ratio^{k j} = 0 (k = 1..jbar).
template <typename Scalar = double>
ExtrapolationPlan<Scalar> extrapolation_coefficients(int jbar, Scalar ratio) {
  if (jbar < 0) throw InputError("jbar must be non-negative");
  if (!(ratio > 0 && ratio < 1)) throw InputError("ratio must lie in (0, 1)");
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  const Mat v = extrapolation_matrix<Scalar>(jbar, ratio);
  Vec e0 = Vec::Zero(jbar + 1);
  e0[0] = 1;
  ExtrapolationPlan<Scalar> plan;
  plan.jbar = jbar;
  plan.ratio = ratio;
  plan.c = v.fullPivLu().solve(e0);
  plan.residual = (v * plan.c - e0).cwiseAbs().maxCoeff();
  if (jbar > 6) {
    const Eigen::JacobiSVD<Mat> svd(v);
    const auto& s = svd.singularValues();
    plan.condition = s[0] / s[s.size() - 1];
  }
  return plan;
}

/// sum_j c_j U_j restricted to the coarsest lattice; solutions ordered coarse to fine.
GridFunction combine(const std::vector<GridFunction>& levels, const Eigen::VectorXd& c);

/// |U - reference|_{0,h} on U's lattice (reference restricted by injection if finer).
double error_norm(const GridFunction& u, const GridFunction& reference);

/// Least-squares slope of log(error) against log(h). Needs >= 3 distinct h and positive errors.
double estimate_order(const std::vector<std::pair<double, double>>& h_error);

struct ConvergenceRow {
  double h = 0.0;
  int n = 0;
  double error = 0.0;
  double order_local = std::numeric_limits<double>::quiet_NaN();  ///< vs previous row
};

struct ConvergenceReport {
  std::string label;
  std::vector<ConvergenceRow> rows;
  double fitted_order = std::numeric_limits<double>::quiet_NaN();

  void add(double h, int n, double error);
  /// Sets fitted_order when at least 3 rows exist.
  void fit();
  /// Header `h,n,error,order_local`, one row per h, footer `fitted_order,,,<slope>`.
  std::string to_csv() const;
};

/// Log-log plot of one or more reports.
std::string convergence_svg(const std::vector<ConvergenceReport>& reports);

}  // namespace afem
