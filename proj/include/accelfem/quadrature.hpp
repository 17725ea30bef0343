#pragma once

#include "accelfem/geometry.hpp"
#include "accelfem/types.hpp"

#include <cmath>
#include <numbers>
#include <vector>

namespace afem {

/// Gauss-Legendre nodes and weights on [-1, 1].
template <typename Scalar = double>
struct GaussLegendre {
  std::vector<Scalar> nodes;
  std::vector<Scalar> weights;
};

/// Newton iteration on the Legendre recurrence, seeded with the Tricomi
/// approximation; exact for polynomials of degree 2 * points - 1.
template <typename Scalar = double>
GaussLegendre<Scalar> gauss_legendre(int points) {
  if (points < 1) throw InputError("Gauss-Legendre rule needs at least one point");
  GaussLegendre<Scalar> rule;
  rule.nodes.resize(points);
  rule.weights.resize(points);
  const Scalar pi = std::numbers::pi_v<Scalar>;
  for (int i = 0; i < (points + 1) / 2; ++i) {
    Scalar x = std::cos(pi * (i + Scalar(0.75)) / (points + Scalar(0.5)));
    Scalar dp = 0;
    for (int iter = 0; iter < 100; ++iter) {
      Scalar p0 = 1, p1 = x;
      for (int k = 2; k <= points; ++k) {
        const Scalar pk = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      if (points == 1) p0 = 1;
      dp = points * (x * p1 - p0) / (x * x - 1);
      const Scalar dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    {
      // final derivative at the converged node
      Scalar p0 = 1, p1 = x;
      for (int k = 2; k <= points; ++k) {
        const Scalar pk = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      if (points == 1) p0 = 1;
      dp = points * (x * p1 - p0) / (x * x - 1);
    }
    const Scalar w = 2 / ((1 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[points - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[points - 1 - i] = w;
  }
  if (points % 2 == 1) rule.nodes[points / 2] = 0;
  return rule;
}

/// Point set with weights; integrates f as sum_q w_q f(x_q).
struct QuadratureRule {
  std::vector<Point> points;
  std::vector<double> weights;

  std::size_t size() const { return points.size(); }
  void append(const QuadratureRule& other);
};

/// Tensor Gauss rule on a box, exact for per-variable degree <= degree.
QuadratureRule box_rule(const Box& box, int degree);

/// Collapsed (Duffy) Gauss rule on a triangle, exact for total degree <= degree.
QuadratureRule triangle_rule(const Triangle& tri, int degree);

QuadratureRule region_rule(const Region& region, int degree);

}  // namespace afem
