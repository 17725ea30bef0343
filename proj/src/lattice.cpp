#include "accelfem/lattice.hpp"

#include "accelfem/keyvalue.hpp"

#include <cmath>

namespace afem {

TorusLattice::TorusLattice(int dimension, double h, int sites_per_axis)
    : dim_(dimension), h_(h), n_(sites_per_axis) {
  if (dimension < 1 || dimension > kMaxDim) throw InputError("lattice dimension must be in 1..4");
  if (!(h > 0.0) || !std::isfinite(h)) throw InputError("lattice spacing must be positive");
  if (sites_per_axis < 4 || sites_per_axis % 2 != 0)
    throw InputError("sites per axis must be even and at least 4, got " + std::to_string(sites_per_axis));
  size_ = 1;
  for (int i = 0; i < dim_; ++i) size_ *= n_;
}

IntVec TorusLattice::multi_index(Index site) const {
  IntVec k(dim_);
  for (int i = 0; i < dim_; ++i) {
    k[i] = static_cast<int>(site % n_);
    site /= n_;
  }
  return k;
}

Index TorusLattice::flat(const IntVec& k) const {
  Index site = 0;
  for (int i = dim_ - 1; i >= 0; --i) {
    const int m = ((k[i] % n_) + n_) % n_;
    site = site * n_ + m;
  }
  return site;
}

Point TorusLattice::coordinates(Index site) const { return h_ * to_point(multi_index(site)); }

Index TorusLattice::neighbor(Index site, const IntVec& offset) const {
  return flat(IntVec(multi_index(site) + offset));
}

int TorusLattice::levels_to(const TorusLattice& fine) const {
  if (fine.dim_ != dim_) return -1;
  int levels = 0;
  int n = n_;
  double h = h_;
  while (n < fine.n_) {
    n *= 2;
    h *= 0.5;
    ++levels;
  }
  return (n == fine.n_ && h == fine.h_) ? levels : -1;
}

GridFunction::GridFunction(const TorusLattice& l, Eigen::VectorXd v) : lattice(l), values(std::move(v)) {
  if (values.size() != l.size()) throw InputError("grid function size does not match its lattice");
}

GridFunction restrict_to(const GridFunction& fine, const TorusLattice& coarse) {
  const int levels = coarse.levels_to(fine.lattice);
  if (levels < 0) throw InputError("restriction between non-nested lattices");
  GridFunction out(coarse);
  const int stride = 1 << levels;
  for (Index s = 0; s < coarse.size(); ++s) {
    out.values[s] = fine.values[fine.lattice.flat(IntVec(stride * coarse.multi_index(s)))];
  }
  return out;
}

double inner_0h(const GridFunction& u, const GridFunction& v) {
  if (u.lattice != v.lattice) throw InputError("inner product of grid functions on different lattices");
  return std::pow(u.lattice.h(), u.lattice.dimension()) * u.values.dot(v.values);
}

double norm_0h(const GridFunction& u) {
  return std::sqrt(std::pow(u.lattice.h(), u.lattice.dimension()) * u.values.squaredNorm());
}

std::string to_csv(const GridFunction& u) {
  const int d = u.lattice.dimension();
  std::string out;
  for (int i = 1; i <= d; ++i) out += "i" + std::to_string(i) + ",";
  for (int i = 1; i <= d; ++i) out += "x" + std::to_string(i) + ",";
  out += "value\n";
  for (Index s = 0; s < u.lattice.size(); ++s) {
    const IntVec k = u.lattice.multi_index(s);
    const Point x = u.lattice.coordinates(s);
    for (int i = 0; i < d; ++i) out += std::to_string(k[i]) + ",";
    for (int i = 0; i < d; ++i) out += format_real(x[i]) + ",";
    out += format_real(u.values[s]) + "\n";
  }
  return out;
}

}  // namespace afem
