#pragma once

#include "accelfem/types.hpp"

#include <memory>
#include <string>
#include <string_view>

namespace afem {

/// Parse or evaluation failure. `offset` is the byte offset into the source
/// for syntax errors, -1 for evaluation errors.
class ExprError : public InputError {
 public:
  ExprError(const std::string& what, long offset) : InputError(what), offset_(offset) {}
  long offset() const { return offset_; }

 private:
  long offset_;
};

enum class ExprOp { number, variable, neg, add, sub, mul, div, pow, sin, cos, exp, sqrt };

struct ExprNode {
  ExprOp op = ExprOp::number;
  double value = 0.0;  ///< literal
  int index = 0;       ///< variable: 0 is t, k >= 1 is x_k; pow: integer exponent
  std::shared_ptr<const ExprNode> lhs;
  std::shared_ptr<const ExprNode> rhs;
};

/// Closed-form function of (x_1..x_d, t).
///
/// Grammar, loosest binding first: `+ -`, then `* /`, then unary `-`, then
/// `^` with an integer literal exponent. Identifiers are x1..x9, t, pi and the
/// one-argument functions sin, cos, exp, sqrt.
class Expr {
 public:
  Expr() : Expr(constant(0.0)) {}

  static Expr parse(std::string_view source);
  static Expr constant(double value);

  /// Throws ExprError on division by zero, sqrt of a negative or any non-finite value.
  double operator()(const Point& x, double t) const;

  /// Fully parenthesised; literals printed with 17 significant digits.
  std::string print() const;

  bool depends_on_time() const;
  /// Largest k with x_k referenced, 0 if none.
  int max_variable() const;
  bool is_constant() const { return max_variable() == 0 && !depends_on_time(); }
  /// True only for the literal 0.
  bool is_zero() const { return root_->op == ExprOp::number && root_->value == 0.0; }

  const ExprNode& root() const { return *root_; }

  friend bool operator==(const Expr& a, const Expr& b);

 private:
  explicit Expr(std::shared_ptr<const ExprNode> root) : root_(std::move(root)) {}
  std::shared_ptr<const ExprNode> root_;
};

}  // namespace afem
