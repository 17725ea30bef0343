#include "accelfem/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace afem {

namespace {

constexpr double kAreaEps = 1e-14;

double cross(const Eigen::Vector2d& a, const Eigen::Vector2d& b) { return a.x() * b.y() - a.y() * b.x(); }

std::vector<Eigen::Vector2d> polygon_of(const Cell& c) {
  if (const auto* t = std::get_if<Triangle>(&c)) return {t->v[0], t->v[1], t->v[2]};
  const auto& b = std::get<Box>(c);
  return {{b.lo[0], b.lo[1]}, {b.hi[0], b.lo[1]}, {b.hi[0], b.hi[1]}, {b.lo[0], b.hi[1]}};
}

}  // namespace

double Box::measure() const {
  double m = 1.0;
  for (int i = 0; i < dimension(); ++i) m *= std::max(0.0, hi[i] - lo[i]);
  return m;
}

bool Box::contains(const Point& x, double tol) const {
  for (int i = 0; i < dimension(); ++i) {
    if (x[i] < lo[i] - tol || x[i] > hi[i] + tol) return false;
  }
  return true;
}

double Triangle::signed_area() const { return 0.5 * cross(v[1] - v[0], v[2] - v[0]); }

bool Triangle::contains(const Point& x, double tol) const {
  const Eigen::Vector2d p(x[0], x[1]);
  const double a = signed_area();
  if (a == 0.0) return false;
  for (int i = 0; i < 3; ++i) {
    const auto& p0 = v[i];
    const auto& p1 = v[(i + 1) % 3];
    if (0.5 * cross(p1 - p0, p - p0) / a < -tol) return false;
  }
  return true;
}

int cell_dimension(const Cell& c) {
  if (std::holds_alternative<Triangle>(c)) return 2;
  return std::get<Box>(c).dimension();
}

double cell_measure(const Cell& c) {
  if (const auto* t = std::get_if<Triangle>(&c)) return std::abs(t->signed_area());
  return std::get<Box>(c).measure();
}

bool cell_contains(const Cell& c, const Point& x, double tol) {
  return std::visit([&](const auto& cell) { return cell.contains(x, tol); }, c);
}

Cell translate(const Cell& c, const Point& offset) {
  if (const auto* t = std::get_if<Triangle>(&c)) {
    Triangle out = *t;
    const Eigen::Vector2d o(offset[0], offset[1]);
    for (auto& p : out.v) p += o;
    return out;
  }
  Box b = std::get<Box>(c);
  b.lo += offset;
  b.hi += offset;
  return b;
}

Cell reflect(const Cell& c) {
  if (const auto* t = std::get_if<Triangle>(&c)) {
    // point reflection is a rotation by pi, orientation is preserved
    Triangle out = *t;
    for (auto& p : out.v) p = -p;
    return out;
  }
  const Box& b = std::get<Box>(c);
  return Box{-b.hi, -b.lo};
}

Box bounding_box(const Cell& c) {
  if (const auto* t = std::get_if<Triangle>(&c)) {
    Point lo(2), hi(2);
    for (int i = 0; i < 2; ++i) {
      lo[i] = std::min({t->v[0][i], t->v[1][i], t->v[2][i]});
      hi[i] = std::max({t->v[0][i], t->v[1][i], t->v[2][i]});
    }
    return Box{lo, hi};
  }
  return std::get<Box>(c);
}

std::vector<Point> boundary_samples(const Cell& c, int per_face) {
  std::vector<Point> out;
  if (const auto* t = std::get_if<Triangle>(&c)) {
    for (int e = 0; e < 3; ++e) {
      for (int k = 1; k <= per_face; ++k) {
        const double s = static_cast<double>(k) / (per_face + 1);
        const Eigen::Vector2d p = (1 - s) * t->v[e] + s * t->v[(e + 1) % 3];
        Point q(2);
        q << p.x(), p.y();
        out.push_back(q);
      }
    }
    return out;
  }
  const Box& b = std::get<Box>(c);
  const int d = b.dimension();
  // interior grid of each face, per_face points per free axis
  for (int axis = 0; axis < d; ++axis) {
    for (int side = 0; side < 2; ++side) {
      int count = 1;
      for (int i = 0; i < d - 1; ++i) count *= per_face;
      for (int m = 0; m < count; ++m) {
        Point p(d);
        int rest = m;
        for (int i = 0; i < d; ++i) {
          if (i == axis) {
            p[i] = side == 0 ? b.lo[i] : b.hi[i];
            continue;
          }
          const int k = rest % per_face;
          rest /= per_face;
          const double s = (k + 1.0) / (per_face + 1.0);
          p[i] = (1 - s) * b.lo[i] + s * b.hi[i];
        }
        out.push_back(p);
      }
    }
  }
  return out;
}

double Region::measure() const {
  double m = 0.0;
  for (const auto& b : boxes) m += b.measure();
  for (const auto& t : triangles) m += std::abs(t.signed_area());
  return m;
}

std::vector<Eigen::Vector2d> clip_convex(const std::vector<Eigen::Vector2d>& subject,
                                         const std::vector<Eigen::Vector2d>& clip) {
  std::vector<Eigen::Vector2d> out = subject;
  const std::size_t m = clip.size();
  for (std::size_t e = 0; e < m && !out.empty(); ++e) {
    const Eigen::Vector2d a = clip[e];
    const Eigen::Vector2d b = clip[(e + 1) % m];
    const Eigen::Vector2d dir = b - a;
    auto side = [&](const Eigen::Vector2d& p) { return cross(dir, p - a); };
    std::vector<Eigen::Vector2d> next;
    for (std::size_t i = 0; i < out.size(); ++i) {
      const Eigen::Vector2d& p = out[i];
      const Eigen::Vector2d& q = out[(i + 1) % out.size()];
      const double sp = side(p);
      const double sq = side(q);
      if (sp >= 0) next.push_back(p);
      if ((sp > 0 && sq < 0) || (sp < 0 && sq > 0)) {
        const double s = sp / (sp - sq);
        next.push_back(p + s * (q - p));
      }
    }
    out = std::move(next);
  }
  return out;
}

Region intersect(const Cell& a, const Cell& b) {
  Region region;
  const int d = cell_dimension(a);
  if (d != cell_dimension(b)) throw GeometryError("intersecting cells of different dimension");

  if (std::holds_alternative<Box>(a) && std::holds_alternative<Box>(b)) {
    const Box& ba = std::get<Box>(a);
    const Box& bb = std::get<Box>(b);
    Box r{ba.lo.cwiseMax(bb.lo), ba.hi.cwiseMin(bb.hi)};
    for (int i = 0; i < d; ++i) {
      if (r.hi[i] - r.lo[i] <= 0.0) return region;
    }
    region.boxes.push_back(r);
    return region;
  }

  for (const Cell* c : {&a, &b}) {
    if (const auto* t = std::get_if<Triangle>(c); t && t->signed_area() <= 0.0)
      throw GeometryError("triangle cell is clockwise or degenerate; malformed element cell");
  }
  const auto poly = clip_convex(polygon_of(a), polygon_of(b));
  if (poly.size() < 3) return region;
  double scale = 0.0;
  for (const auto& p : poly) scale = std::max(scale, p.cwiseAbs().maxCoeff());
  const double eps = kAreaEps * std::max(1.0, scale * scale);
  for (std::size_t i = 1; i + 1 < poly.size(); ++i) {
    Triangle t{{poly[0], poly[i], poly[i + 1]}};
    const double area = t.signed_area();
    if (area < -eps) throw GeometryError("cell intersection produced a clockwise triangle; malformed element cell");
    if (area > eps) region.triangles.push_back(t);
  }
  return region;
}

}  // namespace afem
