#include "accelfem/polynomial.hpp"

#include <array>
#include <cmath>

namespace afem {

namespace {

std::size_t table_size(int dim, int max_degree) {
  std::size_t n = 1;
  for (int i = 0; i < dim; ++i) n *= static_cast<std::size_t>(max_degree + 1);
  return n;
}

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

Polynomial::Polynomial(int dimension, int max_degree)
    : dim_(dimension), max_degree_(max_degree), table_(table_size(dimension, max_degree), 0.0) {
  if (dimension < 1 || dimension > kMaxDim) throw InputError("polynomial dimension out of range");
  if (max_degree < 0) throw InputError("negative polynomial degree");
}

Polynomial Polynomial::constant(int dimension, double value) {
  Polynomial p(dimension, 0);
  p.table_[0] = value;
  return p;
}

std::size_t Polynomial::slot(const IntVec& e) const {
  std::size_t s = 0;
  for (int i = dim_ - 1; i >= 0; --i) s = s * static_cast<std::size_t>(max_degree_ + 1) + e[i];
  return s;
}

IntVec Polynomial::exponent_of(std::size_t s) const {
  IntVec e(dim_);
  for (int i = 0; i < dim_; ++i) {
    e[i] = static_cast<int>(s % static_cast<std::size_t>(max_degree_ + 1));
    s /= static_cast<std::size_t>(max_degree_ + 1);
  }
  return e;
}

void Polynomial::regrow(int max_degree) {
  Polynomial grown(dim_, max_degree);
  for (std::size_t s = 0; s < table_.size(); ++s) {
    if (table_[s] != 0.0) grown.table_[grown.slot(exponent_of(s))] = table_[s];
  }
  *this = std::move(grown);
}

int Polynomial::degree() const {
  int deg = -1;
  for (std::size_t s = 0; s < table_.size(); ++s) {
    if (table_[s] != 0.0) deg = std::max(deg, exponent_of(s).sum());
  }
  return deg;
}

void Polynomial::add_term(double coefficient, const IntVec& exponent) {
  if (exponent.size() != dim_) throw InputError("exponent has wrong dimension");
  if ((exponent.array() < 0).any()) throw InputError("negative exponent");
  const int total = exponent.sum();
  if (total > max_degree_) regrow(total);
  table_[slot(exponent)] += coefficient;
}

double Polynomial::coefficient(const IntVec& exponent) const {
  if (exponent.size() != dim_ || exponent.sum() > max_degree_ || (exponent.array() < 0).any()) return 0.0;
  return table_[slot(exponent)];
}

double Polynomial::operator()(const Point& x) const {
  // powers[i][k] = x_i^k
  std::array<std::array<double, 16>, kMaxDim> powers{};
  const int top = std::min(max_degree_, 15);
  for (int i = 0; i < dim_; ++i) {
    powers[i][0] = 1.0;
    for (int k = 1; k <= top; ++k) powers[i][k] = powers[i][k - 1] * x[i];
  }
  double value = 0.0;
  for (std::size_t s = 0; s < table_.size(); ++s) {
    if (table_[s] == 0.0) continue;
    std::size_t rest = s;
    double term = table_[s];
    for (int i = 0; i < dim_; ++i) {
      const auto k = rest % static_cast<std::size_t>(max_degree_ + 1);
      rest /= static_cast<std::size_t>(max_degree_ + 1);
      term *= k <= 15 ? powers[i][k] : std::pow(x[i], static_cast<double>(k));
    }
    value += term;
  }
  return value;
}

Polynomial Polynomial::derivative(int axis) const {
  Polynomial d(dim_, std::max(max_degree_ - 1, 0));
  for (std::size_t s = 0; s < table_.size(); ++s) {
    if (table_[s] == 0.0) continue;
    IntVec e = exponent_of(s);
    if (e[axis] == 0) continue;
    const double c = table_[s] * e[axis];
    e[axis] -= 1;
    d.table_[d.slot(e)] += c;
  }
  return d;
}

Polynomial Polynomial::reflected() const {
  Polynomial r = *this;
  for (std::size_t s = 0; s < table_.size(); ++s) {
    if (exponent_of(s).sum() % 2 != 0) r.table_[s] = -table_[s];
  }
  return r;
}

Polynomial Polynomial::translated(const Point& offset) const {
  // (x - o)^e expanded term by term
  Polynomial out(dim_, max_degree_);
  for (std::size_t s = 0; s < table_.size(); ++s) {
    if (table_[s] == 0.0) continue;
    const IntVec e = exponent_of(s);
    std::vector<std::pair<IntVec, double>> partial{{IntVec::Zero(dim_), table_[s]}};
    for (int i = 0; i < dim_; ++i) {
      std::vector<std::pair<IntVec, double>> next;
      for (const auto& [exp, c] : partial) {
        for (int k = 0; k <= e[i]; ++k) {
          IntVec ek = exp;
          ek[i] = k;
          next.emplace_back(ek, c * binomial(e[i], k) * std::pow(-offset[i], e[i] - k));
        }
      }
      partial = std::move(next);
    }
    for (const auto& [exp, c] : partial) out.table_[out.slot(exp)] += c;
  }
  return out;
}

Polynomial Polynomial::scaled(double factor) const {
  Polynomial r = *this;
  for (double& c : r.table_) c *= factor;
  return r;
}

std::vector<std::pair<IntVec, double>> Polynomial::terms() const {
  std::vector<std::pair<IntVec, double>> out;
  for (std::size_t s = 0; s < table_.size(); ++s) {
    if (table_[s] != 0.0) out.emplace_back(exponent_of(s), table_[s]);
  }
  return out;
}

bool operator==(const Polynomial& a, const Polynomial& b) {
  if (a.dim_ != b.dim_) return false;
  const auto ta = a.terms();
  const auto tb = b.terms();
  if (ta.size() != tb.size()) return false;
  for (const auto& [e, c] : ta) {
    if (b.coefficient(e) != c) return false;
  }
  return true;
}

}  // namespace afem
