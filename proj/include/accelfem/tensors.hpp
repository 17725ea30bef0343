#pragma once

#include "accelfem/element.hpp"
#include "accelfem/quadrature.hpp"

#include <Eigen/Core>

#include <vector>

namespace afem {

/// Quadrature node on supp psi ∩ supp psi_lambda with the element data needed
/// by every integrand: psi(z), psi_lambda(z) and both gradients.
struct OverlapNode {
  Point z;
  double w = 0.0;
  double psi = 0.0;
  double psi_shift = 0.0;
  Point grad;
  Point grad_shift;
};

/// Exact rule for integrands built from psi, psi_lambda and smooth weights.
/// When `paired` is set, nodes come in (z, -z) couples that are summed
/// together before accumulation, which keeps the lambda = 0 rule invariant
/// under z -> -z in floating point.
struct OverlapRule {
  IntVec lambda;
  bool paired = false;
  std::vector<OverlapNode> nodes;

  template <typename F>
  double integrate(F&& f) const {
    double sum = 0.0;
    if (paired) {
      for (std::size_t q = 0; q + 1 < nodes.size(); q += 2) sum += f(nodes[q]) + f(nodes[q + 1]);
    } else {
      for (const auto& n : nodes) sum += f(n);
    }
    return sum;
  }
};

enum class RuleSymmetry {
  automatic,    ///< mirrored when the element is symmetric, independent otherwise
  mirrored,     ///< rule(-lambda) is the exact reflection of rule(lambda)
  independent,  ///< every rule built from its own cell intersections
};

/// Max |psi(x) - psi(-x)| over interior points of every cell.
double symmetry_defect(const FiniteElement& element);
bool lambda_symmetric(const FiniteElement& element);

/// One OverlapRule per lambda in Gamma (same order as element.gamma()).
class ElementRules {
 public:
  explicit ElementRules(const FiniteElement& element, int degree = 8,
                        RuleSymmetry symmetry = RuleSymmetry::automatic);

  const FiniteElement& element() const { return *element_; }
  int degree() const { return degree_; }
  bool mirrored() const { return mirrored_; }
  const std::vector<OverlapRule>& rules() const { return rules_; }
  const OverlapRule& rule(std::size_t gamma_index) const { return rules_[gamma_index]; }
  /// The lambda = 0 rule: integrates over supp psi.
  const OverlapRule& support_rule() const { return rules_[zero_]; }

 private:
  const FiniteElement* element_;
  int degree_;
  bool mirrored_ = false;
  std::size_t zero_ = 0;
  std::vector<OverlapRule> rules_;
};

/// Build an OverlapRule from cell intersections, no symmetry assumed.
OverlapRule build_overlap_rule(const FiniteElement& element, const IntVec& lambda, int degree);

/// R_lambda = (psi_lambda, psi), R^b = (D_b psi_lambda, psi),
/// R^{ab} = (D_b psi_lambda, D*_a psi), Q^{ij,kl}, Qt^{i,k}; rows follow element.gamma().
struct ReferenceTensors {
  int dim = 0;
  std::vector<IntVec> gamma;
  Eigen::VectorXd R;
  Eigen::MatrixXd Rb;   ///< column b
  Eigen::MatrixXd Rab;  ///< column a*d + b
  Eigen::MatrixXd Q;    ///< column ((i*d + j)*d + k)*d + l
  Eigen::MatrixXd Qt;   ///< column i*d + k

  std::size_t index(const IntVec& lambda) const;  ///< throws if lambda is not in Gamma
  double r(const IntVec& lambda) const { return R[index(lambda)]; }
  double rb(const IntVec& lambda, int b) const { return Rb(index(lambda), b); }
  double rab(const IntVec& lambda, int a, int b) const { return Rab(index(lambda), a * dim + b); }
  double q(const IntVec& lambda, int i, int j, int k, int l) const {
    return Q(index(lambda), ((i * dim + j) * dim + k) * dim + l);
  }
  double qt(const IntVec& lambda, int i, int k) const { return Qt(index(lambda), i * dim + k); }
};

ReferenceTensors compute_reference_tensors(const ElementRules& rules);
ReferenceTensors compute_reference_tensors(const FiniteElement& element, int degree = 8,
                                           RuleSymmetry symmetry = RuleSymmetry::automatic);

}  // namespace afem
