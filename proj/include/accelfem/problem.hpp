#pragma once

#include "accelfem/expr.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace afem {

/// Coefficients and data of
///   du = (D_i(a^{ij} D_j u) + b^i D_i u + c u + f) dt + (sigma^{i rho} D_i u + nu^rho u + g^rho) dW^rho,
/// with the Wiener sequence truncated to rho = 1..rho_max.
struct ProblemSpec {
  int dim = 1;
  int rho_max = 1;
  std::vector<Expr> a;      ///< a[i*dim + j], symmetric
  std::vector<Expr> b;      ///< b[i]
  Expr c;
  Expr f;
  std::vector<Expr> sigma;  ///< sigma[i*rho_max + rho]
  std::vector<Expr> nu;     ///< nu[rho]
  std::vector<Expr> g;      ///< g[rho]
  Expr phi;

  ProblemSpec() = default;
  ProblemSpec(int dimension, int rho_max);

  const Expr& a_ij(int i, int j) const { return a[i * dim + j]; }
  const Expr& sigma_ir(int i, int rho) const { return sigma[i * rho_max + rho]; }

  bool has_noise() const;
  bool drift_depends_on_time() const;
  bool noise_depends_on_time() const;
  /// Keys dropped because their rho exceeded rho_max.
  std::vector<std::string> truncated;
};

/// Reads a problem file (`a.1.1 = "1 + 0.25*cos(x1)"`, `sigma.1.1 = "0.2"`,
/// `phi = "sin(x1)"`, ...). Missing keys are zero except the diagonal of a.
/// An off-diagonal a.i.j may be given once; if a.j.i is also given it must
/// print identically.
ProblemSpec parse_problem(std::string_view text, int dimension, int rho_max);
ProblemSpec load_problem_file(const std::string& path, int dimension, int rho_max);

/// Canonical problem file text; parse_problem(format_problem(p)) == p.
std::string format_problem(const ProblemSpec& p);

}  // namespace afem
