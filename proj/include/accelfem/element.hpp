#pragma once

#include "accelfem/geometry.hpp"
#include "accelfem/polynomial.hpp"
#include "accelfem/types.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace afem {

struct ElementPiece {
  Cell cell;
  Polynomial value;
  std::vector<Polynomial> gradient;
};

/// Compactly supported function given exactly by one polynomial per cell.
class PiecewisePolynomial {
 public:
  PiecewisePolynomial() = default;
  PiecewisePolynomial(int dimension, std::vector<std::pair<Cell, Polynomial>> pieces);

  int dimension() const { return dim_; }
  const std::vector<ElementPiece>& pieces() const { return pieces_; }
  /// Largest total degree over all pieces.
  int degree() const;

  /// First piece whose closed cell contains x.
  std::optional<std::size_t> locate(const Point& x) const;
  /// Exact evaluation; 0 outside every cell.
  double operator()(const Point& x) const;
  Point gradient(const Point& x) const;

  Box bounding_box() const;
  PiecewisePolynomial scaled(double factor) const;
  /// x -> p(x - offset)
  PiecewisePolynomial translated(const Point& offset) const;

  /// Max value jump found at sampled cell-face points (outer faces compare against 0).
  double continuity_defect(int samples_per_face = 5) const;

 private:
  int dim_ = 0;
  std::vector<ElementPiece> pieces_;
};

/// Mother element psi together with its shift set Lambda and the derived
/// neighbour set Gamma = { lambda in Z^d : |supp psi_lambda ∩ supp psi| > 0 }.
class FiniteElement {
 public:
  FiniteElement(std::string name, PiecewisePolynomial psi, std::vector<IntVec> lambda_set);

  const std::string& name() const { return name_; }
  int dimension() const { return psi_.dimension(); }
  const PiecewisePolynomial& psi() const { return psi_; }
  const std::vector<IntVec>& lambda_set() const { return lambda_; }
  /// Sorted lexicographically.
  const std::vector<IntVec>& gamma() const { return gamma_; }
  std::optional<std::size_t> gamma_index(const IntVec& lambda) const;

  /// Measure of supp psi ∩ supp psi_lambda, computed from clipped cells.
  double overlap_measure(const IntVec& lambda) const;

 private:
  std::string name_;
  PiecewisePolynomial psi_;
  std::vector<IntVec> lambda_;
  std::vector<IntVec> gamma_;
};

double evaluate_psi(const FiniteElement& element, const Point& x);

FiniteElement build_hat1d();
FiniteElement build_tensor(int dimension);
FiniteElement build_triangle2d();

/// Accepts "hat1d", "triangle2d", "tensor(d)" and "tensorD" for 1 <= d <= 4.
FiniteElement build_element(std::string_view preset);

/// Key-value element description; see README for the format.
FiniteElement parse_element(std::string_view text);
FiniteElement load_element_file(const std::string& path);
/// Inverse of parse_element (17 significant digits for every real).
std::string format_element(const FiniteElement& element);

}  // namespace afem
