#pragma once

#include "accelfem/types.hpp"

#include <Eigen/Core>

#include <string>

namespace afem {

/// Periodic lattice h Z^d / (n h Z)^d. Site k has coordinates k h in [0, L)^d;
/// flat indices run with axis 1 fastest.
class TorusLattice {
 public:
  TorusLattice() = default;
  TorusLattice(int dimension, double h, int sites_per_axis);

  int dimension() const { return dim_; }
  double h() const { return h_; }
  int n() const { return n_; }
  double length() const { return n_ * h_; }
  Index size() const { return size_; }

  IntVec multi_index(Index site) const;
  /// Wraps every component modulo n.
  Index flat(const IntVec& k) const;
  Point coordinates(Index site) const;
  Index neighbor(Index site, const IntVec& offset) const;

  TorusLattice refined() const { return TorusLattice(dim_, 0.5 * h_, 2 * n_); }
  /// Number of halvings from *this to `fine`, or -1 if `fine` is not a refinement.
  int levels_to(const TorusLattice& fine) const;

  friend bool operator==(const TorusLattice& a, const TorusLattice& b) {
    return a.dim_ == b.dim_ && a.n_ == b.n_ && a.h_ == b.h_;
  }
  friend bool operator!=(const TorusLattice& a, const TorusLattice& b) { return !(a == b); }

 private:
  int dim_ = 0;
  double h_ = 0.0;
  int n_ = 0;
  Index size_ = 0;
};

struct GridFunction {
  TorusLattice lattice;
  Eigen::VectorXd values;

  GridFunction() = default;
  explicit GridFunction(const TorusLattice& l) : lattice(l), values(Eigen::VectorXd::Zero(l.size())) {}
  GridFunction(const TorusLattice& l, Eigen::VectorXd v);
};

/// Injection: samples the fine function at the coarse sites.
GridFunction restrict_to(const GridFunction& fine, const TorusLattice& coarse);

/// (U, V)_{0,h} = h^d sum_x U(x) V(x)
double inner_0h(const GridFunction& u, const GridFunction& v);
double norm_0h(const GridFunction& u);

/// One row per site: i1..id, x1..xd, value.
std::string to_csv(const GridFunction& u);

}  // namespace afem
