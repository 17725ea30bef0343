#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <stdexcept>
#include <string>

namespace afem {

/// Largest spatial dimension supported anywhere in the library.
inline constexpr int kMaxDim = 4;

/// Point in R^d, d <= kMaxDim, stored inline (no heap allocation).
using Point = Eigen::Matrix<double, Eigen::Dynamic, 1, Eigen::ColMajor, kMaxDim, 1>;

/// Integer vector in Z^d: lattice offsets, multi-indices and monomial exponents.
using IntVec = Eigen::Matrix<int, Eigen::Dynamic, 1, Eigen::ColMajor, kMaxDim, 1>;

using Index = Eigen::Index;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed user input: files, expressions, arguments.
class InputError : public Error {
 public:
  using Error::Error;
};

/// Degenerate or inconsistent cell geometry.
class GeometryError : public Error {
 public:
  using Error::Error;
};

/// Solver non-convergence, non-finite states, failed evaluations.
class NumericalError : public Error {
 public:
  using Error::Error;
};

inline bool lex_less(const IntVec& a, const IntVec& b) {
  for (Index i = 0; i < a.size(); ++i) {
    if (a[i] != b[i]) return a[i] < b[i];
  }
  return false;
}

/// True when the first nonzero component is positive.
inline bool lex_positive(const IntVec& v) {
  for (Index i = 0; i < v.size(); ++i) {
    if (v[i] != 0) return v[i] > 0;
  }
  return false;
}

inline Point to_point(const IntVec& v) { return v.cast<double>(); }

}  // namespace afem
