#include "accelfem/assumptions.hpp"

#include "accelfem/keyvalue.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <cstdio>
#include <numbers>

namespace afem {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double symbol(const ReferenceTensors& t, const Point& theta, double* imag = nullptr) {
  double re = 0.0, im = 0.0;
  for (std::size_t g = 0; g < t.gamma.size(); ++g) {
    const double phase = to_point(t.gamma[g]).dot(theta);
    re += t.R[static_cast<Index>(g)] * std::cos(phase);
    im += t.R[static_cast<Index>(g)] * std::sin(phase);
  }
  if (imag) *imag = im;
  return re;
}

int default_grid(int d) {
  switch (d) {
    case 1: return 4096;
    case 2: return 256;
    case 3: return 48;
    default: return 20;
  }
}

std::string idx(std::initializer_list<int> ids) {
  std::string s;
  for (int i : ids) s += std::to_string(i + 1);
  return s;
}

}  // namespace

SymbolMinimum symbol_minimum(const ReferenceTensors& t, int m) {
  const int d = t.dim;
  if (m <= 0) m = default_grid(d);
  Index total = 1;
  for (int i = 0; i < d; ++i) total *= m;

  SymbolMinimum best{std::numeric_limits<double>::infinity(), Point::Zero(d)};
  for (Index k = 0; k < total; ++k) {
    Point theta(d);
    Index rest = k;
    for (int i = 0; i < d; ++i) {
      theta[i] = kTwoPi * static_cast<double>(rest % m) / m;
      rest /= m;
    }
    double im = 0.0;
    const double re = symbol(t, theta, &im);
    if (std::abs(im) > 1e-12)
      throw NumericalError("symbol has imaginary part " + format_real(im) + "; reference tensors are not symmetric");
    if (re < best.value) best = {re, theta};
  }

  // pattern search refinement around the best grid point
  double step = kTwoPi / m;
  while (step > 1e-12) {
    bool improved = false;
    for (int i = 0; i < d; ++i) {
      for (double s : {-step, step}) {
        Point trial = best.theta;
        trial[i] += s;
        const double v = symbol(t, trial);
        if (v < best.value) {
          best = {v, trial};
          improved = true;
        }
      }
    }
    if (!improved) step *= 0.5;
  }
  return best;
}

double check_invertibility(const ReferenceTensors& tensors, int grid_points_per_axis) {
  return symbol_minimum(tensors, grid_points_per_axis).value;
}

std::vector<IdentityCheck> compatibility_identities(const ReferenceTensors& t) {
  const int d = t.dim;
  const Index m = static_cast<Index>(t.gamma.size());
  std::vector<IdentityCheck> out;
  out.push_back({"mass_sum", "sum R", 1.0, t.R.sum()});
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) out.push_back({"stiffness_sum", "sum R^" + idx({i, j}), 0.0, t.Rab.col(i * d + j).sum()});
  for (int i = 0; i < d; ++i)
    for (int k = 0; k < d; ++k) {
      double s = 0.0;
      for (Index g = 0; g < m; ++g) s += t.gamma[g][k] * t.Rb(g, i);
      out.push_back({"first_moment", "sum lambda_" + idx({k}) + " R^" + idx({i}), i == k ? 1.0 : 0.0, s});
    }
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l) {
          double s = 0.0;
          for (Index g = 0; g < m; ++g) s += double(t.gamma[g][k]) * t.gamma[g][l] * t.Rab(g, i * d + j);
          const bool same_set = (i == k && j == l) || (i == l && j == k);
          const double target = same_set ? (i == j ? 2.0 : 1.0) : 0.0;
          out.push_back({"second_moment", "sum lambda_" + idx({k}) + " lambda_" + idx({l}) + " R^" + idx({i, j}),
                         target, s});
        }
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l)
          out.push_back({"q_sum", "sum Q^" + idx({i, j}) + "," + idx({k, l}), 0.0,
                         t.Q.col(((i * d + j) * d + k) * d + l).sum()});
  for (int i = 0; i < d; ++i)
    for (int k = 0; k < d; ++k)
      out.push_back({"qtilde_sum", "sum Qt^" + idx({i}) + "," + idx({k}), 0.0, t.Qt.col(i * d + k).sum()});
  return out;
}

std::map<std::string, double> check_compatibility(const ReferenceTensors& tensors) {
  std::map<std::string, double> worst;
  for (const auto& c : compatibility_identities(tensors)) worst[c.family] = std::max(worst[c.family], c.residual());
  return worst;
}

bool check_cardinal(const FiniteElement& element, double tol) {
  const int d = element.dimension();
  const Box box = element.psi().bounding_box();
  IntVec lo(d), hi(d);
  for (int i = 0; i < d; ++i) {
    lo[i] = static_cast<int>(std::floor(box.lo[i]));
    hi[i] = static_cast<int>(std::ceil(box.hi[i]));
  }
  IntVec k = lo;
  for (;;) {
    const double v = element.psi()(to_point(k));
    const double target = k.isZero() ? 1.0 : 0.0;
    if (std::abs(v - target) > tol) return false;
    int axis = 0;
    while (axis < d && ++k[axis] > hi[axis]) {
      k[axis] = lo[axis];
      ++axis;
    }
    if (axis == d) break;
  }
  return true;
}

ParabolicityResult check_parabolicity(const ProblemSpec& p, double length, double T, int sample_points,
                                      int t_samples) {
  const int d = p.dim;
  if (sample_points < 1 || t_samples < 1) throw InputError("parabolicity check needs positive sample counts");
  const int per_axis = std::max(1, static_cast<int>(std::lround(std::pow(sample_points, 1.0 / d))));
  Index total = 1;
  for (int i = 0; i < d; ++i) total *= per_axis;

  ParabolicityResult worst{std::numeric_limits<double>::infinity(), Point::Zero(d), 0.0};
  Eigen::MatrixXd m(d, d);
  for (int ti = 0; ti < t_samples; ++ti) {
    const double t = t_samples == 1 ? 0.0 : T * ti / (t_samples - 1);
    for (Index k = 0; k < total; ++k) {
      Point x(d);
      Index rest = k;
      for (int i = 0; i < d; ++i) {
        x[i] = length * static_cast<double>(rest % per_axis) / per_axis;
        rest /= per_axis;
      }
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
          double s = 0.0;
          for (int r = 0; r < p.rho_max; ++r) s += p.sigma_ir(i, r)(x, t) * p.sigma_ir(j, r)(x, t);
          m(i, j) = p.a_ij(i, j)(x, t) - 0.5 * s;
        }
      for (int i = 0; i < d; ++i)
        for (int j = i + 1; j < d; ++j)
          if (p.a_ij(i, j)(x, t) != p.a_ij(j, i)(x, t)) throw InputError("diffusion matrix a is not symmetric");
      const double lmin = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(m, Eigen::EigenvaluesOnly).eigenvalues()[0];
      if (lmin < worst.kappa) worst = {lmin, x, t};
    }
  }
  return worst;
}

bool AssumptionReport::compatibility_ok() const {
  for (const auto& [name, r] : compatibility_residuals)
    if (!(r < tolerance)) return false;
  return true;
}

bool AssumptionReport::pass() const {
  return symmetry_ok && normalisation_ok() && continuity_ok() && invertibility_ok() && compatibility_ok() &&
         cardinal_ok;
}

std::string AssumptionReport::table() const {
  std::string out;
  char buf[512];
  auto row = [&](const std::string& name, const std::string& target, const std::string& computed,
                 const std::string& residual, bool ok) {
    std::snprintf(buf, sizeof buf, "%-34s %-24s %-24s %-24s %s\n", name.c_str(), target.c_str(), computed.c_str(),
                  residual.c_str(), ok ? "PASS" : "FAIL");
    out += buf;
  };
  std::snprintf(buf, sizeof buf, "%-34s %-24s %-24s %-24s %s\n", "identity", "target", "computed", "residual",
                "verdict");
  out += buf;
  row("symmetry psi(-x) = psi(x)", format_real(0.0), format_real(symmetry_defect), format_real(symmetry_defect),
      symmetry_ok);
  row("normalisation int psi", format_real(1.0), format_real(integral), format_real(std::abs(integral - 1.0)),
      normalisation_ok());
  row("continuity across faces", format_real(0.0), format_real(continuity_defect), format_real(continuity_defect),
      continuity_ok());
  std::snprintf(buf, sizeof buf, "> %g", delta_threshold);
  row("invertibility delta", buf, format_real(delta_estimate), "", invertibility_ok());
  for (const auto& c : details) row(c.label, format_real(c.target), format_real(c.computed), format_real(c.residual()),
                                    c.residual() < tolerance);
  row("cardinal psi(lambda) = [lambda = 0]", "", "", "", cardinal_ok);
  out += std::string("overall: ") + (pass() ? "PASS" : "FAIL") + "\n";
  return out;
}

AssumptionReport verify_element(const FiniteElement& element, int quad_degree, int grid_points_per_axis) {
  AssumptionReport r;
  r.element = element.name();
  r.symmetry_defect = symmetry_defect(element);
  r.symmetry_ok = lambda_symmetric(element) && r.symmetry_defect < 1e-12;
  const ElementRules rules(element, quad_degree);
  r.integral = rules.support_rule().integrate([](const OverlapNode& n) { return n.w * n.psi; });
  r.continuity_defect = element.psi().continuity_defect();
  const ReferenceTensors t = compute_reference_tensors(rules);
  try {
    r.delta_estimate = check_invertibility(t, grid_points_per_axis);
  } catch (const NumericalError&) {
    r.delta_estimate = 0.0;
  }
  r.details = compatibility_identities(t);
  for (const auto& c : r.details)
    r.compatibility_residuals[c.family] = std::max(r.compatibility_residuals[c.family], c.residual());
  r.cardinal_ok = check_cardinal(element);
  return r;
}

}  // namespace afem
