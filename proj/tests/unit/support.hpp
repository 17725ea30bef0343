#pragma once

#include "accelfem/types.hpp"

#include <initializer_list>

namespace afem::test {

inline Point pt(std::initializer_list<double> v) {
  Point p(static_cast<Index>(v.size()));
  Index i = 0;
  for (double x : v) p[i++] = x;
  return p;
}

inline IntVec iv(std::initializer_list<int> v) {
  IntVec p(static_cast<Index>(v.size()));
  Index i = 0;
  for (int x : v) p[i++] = x;
  return p;
}

// Column of `offset` in a stencil's coefficient matrix.
template <typename Op>
Index offset_column(const Op& op, const IntVec& offset) {
  for (std::size_t k = 0; k < op.offsets().size(); ++k)
    if (op.offsets()[k] == offset) return static_cast<Index>(k);
  return -1;
}

}  // namespace afem::test
