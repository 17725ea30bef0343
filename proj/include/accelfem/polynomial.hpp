#pragma once

#include "accelfem/types.hpp"

#include <utility>
#include <vector>

namespace afem {

/// Multivariate polynomial with a dense coefficient table over all exponent
/// tuples whose components are bounded by the maximum total degree. Entries of
/// total degree above that bound are kept at zero.
class Polynomial {
 public:
  Polynomial() = default;
  Polynomial(int dimension, int max_degree);

  static Polynomial constant(int dimension, double value);

  int dimension() const { return dim_; }
  int max_degree() const { return max_degree_; }
  /// Total degree of the highest nonzero term, -1 for the zero polynomial.
  int degree() const;
  bool is_zero() const { return degree() < 0; }

  /// Adds coefficient * x^exponent, growing the table if the degree exceeds it.
  void add_term(double coefficient, const IntVec& exponent);
  double coefficient(const IntVec& exponent) const;

  double operator()(const Point& x) const;

  Polynomial derivative(int axis) const;
  /// q(x) = p(-x)
  Polynomial reflected() const;
  /// q(x) = p(x - offset)
  Polynomial translated(const Point& offset) const;
  Polynomial scaled(double factor) const;

  std::vector<std::pair<IntVec, double>> terms() const;

  friend bool operator==(const Polynomial& a, const Polynomial& b);

 private:
  std::size_t slot(const IntVec& exponent) const;
  IntVec exponent_of(std::size_t slot) const;
  void regrow(int max_degree);

  int dim_ = 0;
  int max_degree_ = 0;
  std::vector<double> table_;
};

}  // namespace afem
