#include "accelfem/quadrature.hpp"

namespace afem {

void QuadratureRule::append(const QuadratureRule& other) {
  points.insert(points.end(), other.points.begin(), other.points.end());
  weights.insert(weights.end(), other.weights.begin(), other.weights.end());
}

QuadratureRule box_rule(const Box& box, int degree) {
  const int m = std::max(1, (degree + 2) / 2);
  const auto gl = gauss_legendre<double>(m);
  const int d = box.dimension();
  int count = 1;
  for (int i = 0; i < d; ++i) count *= m;

  QuadratureRule rule;
  rule.points.reserve(count);
  rule.weights.reserve(count);
  for (int idx = 0; idx < count; ++idx) {
    Point p(d);
    double w = 1.0;
    int rest = idx;
    for (int i = 0; i < d; ++i) {
      const int k = rest % m;
      rest /= m;
      const double half = 0.5 * (box.hi[i] - box.lo[i]);
      p[i] = box.lo[i] + half * (gl.nodes[k] + 1.0);
      w *= half * gl.weights[k];
    }
    rule.points.push_back(p);
    rule.weights.push_back(w);
  }
  return rule;
}

QuadratureRule triangle_rule(const Triangle& tri, int degree) {
  // x = v0 + u (v1 - v0) + u v (v2 - v1)... written via the collapsed square:
  // (u, v) in [0,1]^2 -> v0 + u (v1 - v0) + u v (v2 - v1), Jacobian 2|T| u.
  const int m = std::max(1, (degree + 3) / 2);
  const auto gl = gauss_legendre<double>(m);
  const double area2 = 2.0 * std::abs(tri.signed_area());
  QuadratureRule rule;
  rule.points.reserve(m * m);
  rule.weights.reserve(m * m);
  for (int a = 0; a < m; ++a) {
    const double u = 0.5 * (gl.nodes[a] + 1.0);
    const double wu = 0.5 * gl.weights[a];
    for (int b = 0; b < m; ++b) {
      const double v = 0.5 * (gl.nodes[b] + 1.0);
      const double wv = 0.5 * gl.weights[b];
      const Eigen::Vector2d x = tri.v[0] + u * (tri.v[1] - tri.v[0]) + u * v * (tri.v[2] - tri.v[1]);
      Point p(2);
      p << x.x(), x.y();
      rule.points.push_back(p);
      rule.weights.push_back(area2 * u * wu * wv);
    }
  }
  return rule;
}

QuadratureRule region_rule(const Region& region, int degree) {
  QuadratureRule rule;
  for (const auto& b : region.boxes) rule.append(box_rule(b, degree));
  for (const auto& t : region.triangles) rule.append(triangle_rule(t, degree));
  return rule;
}

}  // namespace afem
