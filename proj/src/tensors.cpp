#include "accelfem/tensors.hpp"

#include <algorithm>
#include <cmath>

namespace afem {

namespace {

Point cell_centroid_shift(const Cell& c, const Point& p, double s) {
  // pull p a fraction s of the way towards the cell centre
  Point centre;
  if (const auto* t = std::get_if<Triangle>(&c)) {
    const Eigen::Vector2d m = (t->v[0] + t->v[1] + t->v[2]) / 3.0;
    centre = Point(2);
    centre << m.x(), m.y();
  } else {
    const Box& b = std::get<Box>(c);
    centre = 0.5 * (b.lo + b.hi);
  }
  return (1 - s) * p + s * centre;
}

OverlapNode mirror(const OverlapNode& n) {
  return OverlapNode{-n.z, n.w, n.psi, n.psi_shift, -n.grad, -n.grad_shift};
}

}  // namespace

double symmetry_defect(const FiniteElement& element) {
  double worst = 0.0;
  const auto& psi = element.psi();
  for (const auto& piece : psi.pieces()) {
    Region whole;
    if (const auto* t = std::get_if<Triangle>(&piece.cell)) whole.triangles.push_back(*t);
    else whole.boxes.push_back(std::get<Box>(piece.cell));
    std::vector<Point> samples = region_rule(whole, 4).points;
    for (const Point& x : boundary_samples(piece.cell, 3)) samples.push_back(cell_centroid_shift(piece.cell, x, 0.01));
    for (const Point& x : samples) worst = std::max(worst, std::abs(piece.value(x) - psi(Point(-x))));
  }
  return worst;
}

bool lambda_symmetric(const FiniteElement& element) {
  const auto& set = element.lambda_set();
  return std::all_of(set.begin(), set.end(), [&](const IntVec& l) {
    return std::find(set.begin(), set.end(), IntVec(-l)) != set.end();
  });
}

OverlapRule build_overlap_rule(const FiniteElement& element, const IntVec& lambda, int degree) {
  OverlapRule rule;
  rule.lambda = lambda;
  const Point shift = to_point(lambda);
  const int d = element.dimension();
  for (const auto& a : element.psi().pieces()) {
    if (a.value.is_zero()) continue;
    for (const auto& b : element.psi().pieces()) {
      if (b.value.is_zero()) continue;
      const Region region = intersect(a.cell, translate(b.cell, shift));
      if (region.empty()) continue;
      const QuadratureRule q = region_rule(region, degree);
      for (std::size_t k = 0; k < q.size(); ++k) {
        OverlapNode n;
        n.z = q.points[k];
        n.w = q.weights[k];
        const Point zs = n.z - shift;
        n.psi = a.value(n.z);
        n.psi_shift = b.value(zs);
        n.grad = Point(d);
        n.grad_shift = Point(d);
        for (int i = 0; i < d; ++i) {
          n.grad[i] = a.gradient[i](n.z);
          n.grad_shift[i] = b.gradient[i](zs);
        }
        rule.nodes.push_back(std::move(n));
      }
    }
  }
  return rule;
}

ElementRules::ElementRules(const FiniteElement& element, int degree, RuleSymmetry symmetry)
    : element_(&element), degree_(degree) {
  if (degree < 1) throw InputError("quadrature degree must be positive");
  const bool symmetric = lambda_symmetric(element) && symmetry_defect(element) < 1e-12;
  if (symmetry == RuleSymmetry::mirrored && !symmetric)
    throw InputError("mirrored quadrature requested for a non-symmetric element");
  mirrored_ = symmetry == RuleSymmetry::mirrored || (symmetry == RuleSymmetry::automatic && symmetric);

  const auto& gamma = element.gamma();
  rules_.resize(gamma.size());
  for (std::size_t g = 0; g < gamma.size(); ++g) {
    const IntVec& lambda = gamma[g];
    if (lambda.isZero()) zero_ = g;
    if (!mirrored_) {
      rules_[g] = build_overlap_rule(element, lambda, degree);
      continue;
    }
    if (lambda.isZero()) {
      const OverlapRule base = build_overlap_rule(element, lambda, degree);
      OverlapRule& r = rules_[g];
      r.lambda = lambda;
      r.paired = true;
      for (const auto& n : base.nodes) {
        OverlapNode half = n;
        half.w = 0.5 * n.w;
        r.nodes.push_back(half);
        r.nodes.push_back(mirror(half));
      }
    } else if (lex_positive(lambda)) {
      rules_[g] = build_overlap_rule(element, lambda, degree);
    }
  }
  if (mirrored_) {
    // Gamma is symmetric for a symmetric psi, so every negative lambda has its partner
    for (std::size_t g = 0; g < gamma.size(); ++g) {
      if (gamma[g].isZero() || lex_positive(gamma[g])) continue;
      const auto partner = element.gamma_index(IntVec(-gamma[g]));
      if (!partner) throw GeometryError("neighbour set is not symmetric");
      OverlapRule& r = rules_[g];
      r.lambda = gamma[g];
      for (const auto& n : rules_[*partner].nodes) r.nodes.push_back(mirror(n));
    }
  }
}

std::size_t ReferenceTensors::index(const IntVec& lambda) const {
  const auto it = std::lower_bound(gamma.begin(), gamma.end(), lambda, lex_less);
  if (it == gamma.end() || *it != lambda) throw InputError("offset is not in the neighbour set");
  return static_cast<std::size_t>(it - gamma.begin());
}

ReferenceTensors compute_reference_tensors(const ElementRules& rules) {
  const FiniteElement& e = rules.element();
  const int d = e.dimension();
  const Index m = static_cast<Index>(e.gamma().size());
  ReferenceTensors t;
  t.dim = d;
  t.gamma = e.gamma();
  t.R = Eigen::VectorXd::Zero(m);
  t.Rb = Eigen::MatrixXd::Zero(m, d);
  t.Rab = Eigen::MatrixXd::Zero(m, d * d);
  t.Q = Eigen::MatrixXd::Zero(m, d * d * d * d);
  t.Qt = Eigen::MatrixXd::Zero(m, d * d);

  for (Index g = 0; g < m; ++g) {
    const OverlapRule& rule = rules.rule(static_cast<std::size_t>(g));
    t.R[g] = rule.integrate([](const OverlapNode& n) { return n.w * n.psi_shift * n.psi; });
    for (int b = 0; b < d; ++b) {
      t.Rb(g, b) = rule.integrate([b](const OverlapNode& n) { return n.w * n.grad_shift[b] * n.psi; });
      for (int a = 0; a < d; ++a) {
        // D*_a = -D_a
        t.Rab(g, a * d + b) =
            -rule.integrate([a, b](const OverlapNode& n) { return n.w * n.grad_shift[b] * n.grad[a]; });
      }
    }
    for (int i = 0; i < d; ++i) {
      for (int k = 0; k < d; ++k) {
        t.Qt(g, i * d + k) =
            rule.integrate([i, k](const OverlapNode& n) { return n.w * n.z[k] * n.grad_shift[i] * n.psi; });
        for (int j = 0; j < d; ++j) {
          for (int l = 0; l < d; ++l) {
            t.Q(g, ((i * d + j) * d + k) * d + l) = -rule.integrate([i, j, k, l](const OverlapNode& n) {
              return n.w * n.z[k] * n.z[l] * n.grad_shift[j] * n.grad[i];
            });
          }
        }
      }
    }
  }
  return t;
}

ReferenceTensors compute_reference_tensors(const FiniteElement& element, int degree, RuleSymmetry symmetry) {
  return compute_reference_tensors(ElementRules(element, degree, symmetry));
}

}  // namespace afem
