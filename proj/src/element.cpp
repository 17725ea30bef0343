#include "accelfem/element.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>

namespace afem {

namespace {

Cell normalised(Cell c, int dim) {
  if (auto* t = std::get_if<Triangle>(&c)) {
    if (dim != 2) throw InputError("triangle cells require dimension 2");
    const double a = t->signed_area();
    if (std::abs(a) < 1e-14) throw GeometryError("degenerate triangle cell");
    if (a < 0) std::swap(t->v[1], t->v[2]);
    return c;
  }
  const Box& b = std::get<Box>(c);
  if (b.dimension() != dim) throw InputError("box cell has wrong dimension");
  for (int i = 0; i < dim; ++i) {
    if (!(b.hi[i] > b.lo[i])) throw GeometryError("degenerate box cell");
  }
  return c;
}

}  // namespace

PiecewisePolynomial::PiecewisePolynomial(int dimension, std::vector<std::pair<Cell, Polynomial>> pieces)
    : dim_(dimension) {
  if (dimension < 1 || dimension > kMaxDim) throw InputError("element dimension must be in 1..4");
  if (pieces.empty()) throw InputError("element needs at least one cell");
  for (auto& [cell, poly] : pieces) {
    if (poly.dimension() != dimension) throw InputError("polynomial dimension does not match element");
    ElementPiece piece{normalised(std::move(cell), dimension), poly, {}};
    for (int i = 0; i < dimension; ++i) piece.gradient.push_back(poly.derivative(i));
    pieces_.push_back(std::move(piece));
  }
  for (std::size_t a = 0; a < pieces_.size(); ++a) {
    for (std::size_t b = a + 1; b < pieces_.size(); ++b) {
      if (intersect(pieces_[a].cell, pieces_[b].cell).measure() > 1e-12)
        throw GeometryError("element cells overlap with positive measure");
    }
  }
}

int PiecewisePolynomial::degree() const {
  int d = 0;
  for (const auto& p : pieces_) d = std::max(d, p.value.degree());
  return d;
}

std::optional<std::size_t> PiecewisePolynomial::locate(const Point& x) const {
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    if (cell_contains(pieces_[i].cell, x)) return i;
  }
  return std::nullopt;
}

double PiecewisePolynomial::operator()(const Point& x) const {
  const auto i = locate(x);
  return i ? pieces_[*i].value(x) : 0.0;
}

Point PiecewisePolynomial::gradient(const Point& x) const {
  Point g = Point::Zero(dim_);
  if (const auto i = locate(x)) {
    for (int k = 0; k < dim_; ++k) g[k] = pieces_[*i].gradient[k](x);
  }
  return g;
}

Box PiecewisePolynomial::bounding_box() const {
  Box box = afem::bounding_box(pieces_.front().cell);
  for (const auto& p : pieces_) {
    const Box b = afem::bounding_box(p.cell);
    box.lo = box.lo.cwiseMin(b.lo);
    box.hi = box.hi.cwiseMax(b.hi);
  }
  return box;
}

PiecewisePolynomial PiecewisePolynomial::scaled(double factor) const {
  std::vector<std::pair<Cell, Polynomial>> out;
  for (const auto& p : pieces_) out.emplace_back(p.cell, p.value.scaled(factor));
  return PiecewisePolynomial(dim_, std::move(out));
}

PiecewisePolynomial PiecewisePolynomial::translated(const Point& offset) const {
  std::vector<std::pair<Cell, Polynomial>> out;
  for (const auto& p : pieces_) out.emplace_back(translate(p.cell, offset), p.value.translated(offset));
  return PiecewisePolynomial(dim_, std::move(out));
}

double PiecewisePolynomial::continuity_defect(int samples_per_face) const {
  double worst = 0.0;
  for (const auto& piece : pieces_) {
    for (const Point& x : boundary_samples(piece.cell, samples_per_face)) {
      std::vector<double> values;
      for (const auto& other : pieces_) {
        if (cell_contains(other.cell, x, 1e-12)) values.push_back(other.value(x));
      }
      if (values.size() == 1) values.push_back(0.0);
      const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
      worst = std::max(worst, *hi - *lo);
    }
  }
  return worst;
}

FiniteElement::FiniteElement(std::string name, PiecewisePolynomial psi, std::vector<IntVec> lambda_set)
    : name_(std::move(name)), psi_(std::move(psi)), lambda_(std::move(lambda_set)) {
  const int d = psi_.dimension();
  bool has_zero = false;
  for (const auto& l : lambda_) {
    if (l.size() != d) throw InputError("shift vector has wrong dimension");
    if (l.isZero()) has_zero = true;
  }
  if (!has_zero) throw InputError("shift set must contain the zero vector");

  const Box box = psi_.bounding_box();
  IntVec reach(d);
  for (int i = 0; i < d; ++i) reach[i] = static_cast<int>(std::ceil(box.hi[i] - box.lo[i]));
  int count = 1;
  for (int i = 0; i < d; ++i) count *= 2 * reach[i] + 1;
  for (int m = 0; m < count; ++m) {
    IntVec lambda(d);
    int rest = m;
    for (int i = 0; i < d; ++i) {
      lambda[i] = rest % (2 * reach[i] + 1) - reach[i];
      rest /= 2 * reach[i] + 1;
    }
    if (overlap_measure(lambda) > 0.0) gamma_.push_back(lambda);
  }
  std::sort(gamma_.begin(), gamma_.end(), lex_less);
}

std::optional<std::size_t> FiniteElement::gamma_index(const IntVec& lambda) const {
  const auto it = std::lower_bound(gamma_.begin(), gamma_.end(), lambda, lex_less);
  if (it != gamma_.end() && *it == lambda) return static_cast<std::size_t>(it - gamma_.begin());
  return std::nullopt;
}

double FiniteElement::overlap_measure(const IntVec& lambda) const {
  const Point shift = to_point(lambda);
  double m = 0.0;
  for (const auto& a : psi_.pieces()) {
    if (a.value.is_zero()) continue;
    for (const auto& b : psi_.pieces()) {
      if (b.value.is_zero()) continue;
      m += intersect(a.cell, translate(b.cell, shift)).measure();
    }
  }
  return m;
}

double evaluate_psi(const FiniteElement& element, const Point& x) {
  if (x.size() != element.dimension()) throw InputError("evaluation point has wrong dimension");
  return element.psi()(x);
}

FiniteElement build_hat1d() {
  Point lo(1), mid(1), hi(1);
  lo << -1;
  mid << 0;
  hi << 1;
  Polynomial left(1, 1), right(1, 1);
  IntVec e0 = IntVec::Zero(1), e1 = IntVec::Ones(1);
  left.add_term(1.0, e0);
  left.add_term(1.0, e1);
  right.add_term(1.0, e0);
  right.add_term(-1.0, e1);
  PiecewisePolynomial psi(1, {{Box{lo, mid}, left}, {Box{mid, hi}, right}});
  std::vector<IntVec> lambda;
  for (int k : {-1, 0, 1}) lambda.push_back(IntVec::Constant(1, k));
  return FiniteElement("hat1d", std::move(psi), std::move(lambda));
}

FiniteElement build_tensor(int d) {
  if (d < 1 || d > kMaxDim) throw InputError("tensor element dimension must be in 1..4");
  std::vector<std::pair<Cell, Polynomial>> pieces;
  for (int orthant = 0; orthant < (1 << d); ++orthant) {
    Point lo(d), hi(d);
    IntVec sign(d);
    for (int k = 0; k < d; ++k) {
      const bool positive = (orthant >> k) & 1;
      sign[k] = positive ? 1 : -1;
      lo[k] = positive ? 0.0 : -1.0;
      hi[k] = positive ? 1.0 : 0.0;
    }
    // prod_k (1 - sign_k x_k), expanded over subsets
    Polynomial p(d, d);
    for (int subset = 0; subset < (1 << d); ++subset) {
      IntVec e = IntVec::Zero(d);
      double c = 1.0;
      for (int k = 0; k < d; ++k) {
        if ((subset >> k) & 1) {
          e[k] = 1;
          c *= -sign[k];
        }
      }
      p.add_term(c, e);
    }
    pieces.emplace_back(Box{lo, hi}, p);
  }
  std::vector<IntVec> lambda{IntVec::Zero(d)};
  for (int k = 0; k < d; ++k) {
    for (int s : {-1, 1}) {
      IntVec e = IntVec::Zero(d);
      e[k] = s;
      lambda.push_back(e);
    }
  }
  return FiniteElement("tensor(" + std::to_string(d) + ")", PiecewisePolynomial(d, std::move(pieces)),
                       std::move(lambda));
}

FiniteElement build_triangle2d() {
  auto tri = [](double ax, double ay, double bx, double by, double cx, double cy) {
    return Triangle{{Eigen::Vector2d(ax, ay), Eigen::Vector2d(bx, by), Eigen::Vector2d(cx, cy)}};
  };
  auto affine = [](double c0, double c1, double c2) {
    Polynomial p(2, 1);
    IntVec e(2);
    e << 0, 0;
    p.add_term(c0, e);
    e << 1, 0;
    p.add_term(c1, e);
    e << 0, 1;
    p.add_term(c2, e);
    return p;
  };
  std::vector<std::pair<Cell, Polynomial>> pieces{
      {tri(0, 0, 1, 0, 1, 1), affine(1, -1, 0)},     // 0 <= x2 <= x1 <= 1
      {tri(0, 0, 1, 1, 0, 1), affine(1, 0, -1)},     // 0 <= x1 <= x2 <= 1
      {tri(0, 0, 0, 1, -1, 0), affine(1, 1, -1)},    // 0 <= x2 <= 1, x2 - 1 <= x1 <= 0
      {tri(0, 0, -1, 0, -1, -1), affine(1, 1, 0)},   // -1 <= x1 <= x2 <= 0
      {tri(0, 0, -1, -1, 0, -1), affine(1, 0, 1)},   // -1 <= x2 <= x1 <= 0
      {tri(0, 0, 0, -1, 1, 0), affine(1, -1, 1)},    // 0 <= x1 <= 1, x1 - 1 <= x2 <= 0
  };
  std::vector<IntVec> lambda;
  for (auto [a, b] : {std::pair{0, 0}, {1, 0}, {-1, 0}, {0, 1}, {0, -1}}) {
    IntVec l(2);
    l << a, b;
    lambda.push_back(l);
  }
  return FiniteElement("triangle2d", PiecewisePolynomial(2, std::move(pieces)), std::move(lambda));
}

FiniteElement build_element(std::string_view preset) {
  std::string name;
  for (char c : preset) {
    if (!std::isspace(static_cast<unsigned char>(c))) name += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  if (name == "hat1d") return build_hat1d();
  if (name == "triangle2d") return build_triangle2d();
  if (name.rfind("tensor", 0) == 0) {
    std::string digits = name.substr(6);
    if (digits.size() >= 2 && digits.front() == '(' && digits.back() == ')') digits = digits.substr(1, digits.size() - 2);
    int d = 0;
    const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), d);
    if (ec != std::errc() || ptr != digits.data() + digits.size() || digits.empty())
      throw InputError("unknown element preset '" + std::string(preset) + "'");
    if (d < 1 || d > kMaxDim) throw InputError("tensor element dimension must be in 1..4, got " + digits);
    return build_tensor(d);
  }
  throw InputError("unknown element preset '" + std::string(preset) + "'");
}

}  // namespace afem
