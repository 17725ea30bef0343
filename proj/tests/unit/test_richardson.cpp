#include "accelfem/experiment.hpp"
#include "accelfem/richardson.hpp"
#include "accelfem/spectral.hpp"
#include "support.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace afem;

namespace {

constexpr double kTwoPi = 2 * std::numbers::pi;

// Lagrange basis at 0 on the nodes ratio^j: the weights that cancel the first jbar powers.
std::vector<long double> lagrange_weights(int jbar, long double ratio) {
  std::vector<long double> c(static_cast<std::size_t>(jbar + 1));
  for (int j = 0; j <= jbar; ++j) {
    long double w = 1;
    for (int m = 0; m <= jbar; ++m)
      if (m != j) w *= (0 - std::pow(ratio, m)) / (std::pow(ratio, j) - std::pow(ratio, m));
    c[static_cast<std::size_t>(j)] = w;
  }
  return c;
}

GridFunction field(const TorusLattice& l, auto&& f) {
  GridFunction g(l);
  for (Index s = 0; s < l.size(); ++s) g.values[s] = f(l.coordinates(s));
  return g;
}

}  // namespace

TEST_CASE("extrapolation coefficients") {
  CHECK(extrapolation_coefficients(0, 0.25).c.size() == 1);
  CHECK(extrapolation_coefficients(0, 0.25).c[0] == 1.0);

  const auto p1 = extrapolation_coefficients(1, 0.25);
  CHECK(p1.c[0] == doctest::Approx(-1.0 / 3.0).epsilon(1e-14));
  CHECK(p1.c[1] == doctest::Approx(4.0 / 3.0).epsilon(1e-14));

  const auto p2 = extrapolation_coefficients(2, 0.25);
  CHECK(std::abs(p2.c[0] - 1.0 / 45.0) < 1e-14);
  CHECK(std::abs(p2.c[1] + 4.0 / 9.0) < 1e-14);
  CHECK(std::abs(p2.c[2] - 64.0 / 45.0) < 1e-14);
  CHECK(std::abs(p2.c.sum() - 1.0) < 1e-12);
  for (int k = 1; k <= 2; ++k) {
    double s = 0.0;
    for (int j = 0; j <= 2; ++j) s += p2.c[j] * std::pow(0.25, k * j);
    CHECK(std::abs(s) < 1e-12);
  }

  for (double ratio : {0.25, 1.0 / 16.0, 0.5}) {
    for (int jbar = 0; jbar <= 5; ++jbar) {
      CAPTURE(ratio);
      CAPTURE(jbar);
      const auto plan = extrapolation_coefficients(jbar, ratio);
      const auto oracle = lagrange_weights(jbar, ratio);
      // V is too ill-conditioned at ratio 1/16, jbar 5 for 1e-11 agreement in double
      for (int j = 0; j <= jbar && (jbar <= 4 || ratio > 0.1); ++j)
        CHECK(std::abs(plan.c[j] - static_cast<double>(oracle[static_cast<std::size_t>(j)])) <
              1e-11 * std::max(1.0, std::abs(plan.c[j])));
      if (jbar <= 4) CHECK(plan.residual < 1e-12);
      CHECK(std::isnan(plan.condition));
    }
  }
  const auto wide = extrapolation_coefficients(7, 0.25);
  CHECK(wide.condition > 1e6);
  CHECK(std::isfinite(wide.condition));
  CHECK_THROWS_AS(extrapolation_coefficients(-1, 0.25), InputError);
  CHECK_THROWS_AS(extrapolation_coefficients(1, 1.0), InputError);

  const auto ld = extrapolation_coefficients<long double>(3, 0.25L);
  CHECK(static_cast<double>(std::abs(ld.c.sum() - 1.0L)) < 1e-15);
}

TEST_CASE("combining levels") {
  const TorusLattice coarse(1, kTwoPi / 8, 8);
  auto v = [](const Point& x) { return std::sin(x[0]); };
  auto e = [](const Point& x) { return std::cos(3 * x[0]) + 2.0; };

  CHECK(combine({field(coarse, v)}, Eigen::VectorXd::Ones(1)).values == field(coarse, v).values);

  std::vector<GridFunction> levels;
  for (int j = 0; j < 2; ++j) {
    TorusLattice l = coarse;
    for (int k = 0; k < j; ++k) l = l.refined();
    levels.push_back(field(l, [&](const Point& x) { return v(x) + e(x) * std::pow(0.25, j); }));
  }
  const auto out = combine(levels, extrapolation_coefficients(1, 0.25).c);
  CHECK(out.lattice == coarse);
  CHECK((out.values - field(coarse, v).values).cwiseAbs().maxCoeff() < 1e-13);

  std::vector<GridFunction> constant;
  for (int j = 0; j < 3; ++j) {
    TorusLattice l = coarse;
    for (int k = 0; k < j; ++k) l = l.refined();
    constant.push_back(field(l, [](const Point&) { return 2.5; }));
  }
  CHECK((combine(constant, extrapolation_coefficients(2, 0.25).c).values.array() - 2.5).abs().maxCoeff() < 1e-13);

  // linear in each level
  const Eigen::VectorXd c = extrapolation_coefficients(1, 0.25).c;
  std::vector<GridFunction> scaled = levels;
  scaled[1].values *= 3.0;
  const Eigen::VectorXd lin = combine(scaled, c).values - combine(levels, c).values;
  CHECK((lin - 2.0 * c[1] * restrict_to(levels[1], coarse).values).cwiseAbs().maxCoeff() < 1e-13);

  CHECK_THROWS_AS(combine(levels, Eigen::VectorXd::Ones(3)), InputError);
  CHECK_THROWS_AS(combine({levels[1], levels[0]}, c), InputError);
}

TEST_CASE("error norm") {
  const TorusLattice l(2, 0.5, 6);
  const auto u = field(l, [](const Point& x) { return x[0] * x[1]; });
  CHECK(error_norm(u, u) == 0.0);
  auto shifted = u;
  shifted.values.array() += 0.01;
  CHECK(error_norm(shifted, u) == doctest::Approx(0.01 * std::sqrt(l.length() * l.length())).epsilon(1e-13));

  std::mt19937_64 rng(1);
  std::normal_distribution<double> nd;
  GridFunction a(l), b(l);
  for (Index s = 0; s < l.size(); ++s) {
    a.values[s] = nd(rng);
    b.values[s] = nd(rng);
  }
  double sum = 0.0;
  for (Index s = 0; s < l.size(); ++s) sum += (a.values[s] - b.values[s]) * (a.values[s] - b.values[s]);
  CHECK(error_norm(a, b) == doctest::Approx(std::sqrt(sum * 0.25)).epsilon(1e-14));

  const auto fine = field(l.refined(), [](const Point& x) { return x[0] * x[1]; });
  CHECK(error_norm(u, fine) < 1e-14);
}

TEST_CASE("order estimates") {
  std::vector<std::pair<double, double>> sq, quart, mixed;
  for (double h : {0.4, 0.2, 0.1, 0.05}) {
    sq.emplace_back(h, h * h);
    quart.emplace_back(h, 3 * std::pow(h, 4));
    mixed.emplace_back(h, h * h + 0.01 * h);
  }
  CHECK(std::abs(estimate_order(sq) - 2.0) < 1e-10);
  CHECK(std::abs(estimate_order(quart) - 4.0) < 1e-10);
  const double m = estimate_order(mixed);
  CHECK(m > 1.0);
  CHECK(m < 2.0);
  auto finer = mixed;
  for (auto& [h, e] : finer) {
    h /= 8;
    e = h * h + 0.01 * h;
  }
  CHECK(estimate_order(finer) < m);  // the h term takes over as h shrinks

  CHECK_THROWS_AS(estimate_order({{0.1, 1.0}, {0.05, 0.5}}), InputError);
  CHECK_THROWS_AS(estimate_order({{0.1, 1.0}, {0.1, 0.5}, {0.1, 0.2}}), InputError);
  CHECK_THROWS_AS(estimate_order({{0.1, 1.0}, {0.05, 0.0}, {0.025, 0.2}}), NumericalError);
}

TEST_CASE("convergence report output") {
  ConvergenceReport r{"base", {}, std::numeric_limits<double>::quiet_NaN()};
  r.add(0.4, 16, 0.16);
  r.add(0.2, 32, 0.04);
  r.add(0.1, 64, 0.01);
  r.fit();
  CHECK(r.fitted_order == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(std::isnan(r.rows[0].order_local));
  CHECK(r.rows[1].order_local == doctest::Approx(2.0).epsilon(1e-12));
  const std::string csv = r.to_csv();
  CHECK(csv.rfind("h,n,error,order_local\n", 0) == 0);
  CHECK(csv.find("fitted_order,,,") != std::string::npos);
  CHECK(csv.find("\r") == std::string::npos);
  const std::string svg = convergence_svg({r});
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("</svg>") != std::string::npos);
}

TEST_CASE("Fourier collocation") {
  const int n = 16;
  const Eigen::MatrixXd d = fourier_derivative(n, kTwoPi);
  Eigen::VectorXd u(n), du(n);
  for (int j = 0; j < n; ++j) {
    const double x = j * kTwoPi / n;
    u[j] = std::sin(3 * x) + std::cos(x);
    du[j] = 3 * std::cos(3 * x) - std::sin(x);
  }
  CHECK((d * u - du).cwiseAbs().maxCoeff() < 1e-12);
  CHECK_THROWS_AS(fourier_derivative(7, 1.0), InputError);

  // the sin mode has symbol exactly 1, so every step divides by 1 + dt
  const auto p = parse_problem("a.1.1 = \"1\"\nphi = \"sin(x1)\"\n", 1, 1);
  const TorusLattice l(1, kTwoPi / n, n);
  const auto traj = spectral_reference(p, l, nullptr, 0.1, 10, RecordPolicy::terminal());
  for (Index s = 0; s < l.size(); ++s)
    CHECK(traj.terminal().values[s] == doctest::Approx(std::sin(l.coordinates(s)[0]) * std::pow(1.01, -10)).epsilon(1e-12));
  CHECK_THROWS_AS(spectral_reference(parse_problem("a.1.1=\"1\"\na.2.2=\"1\"\n", 2, 1), TorusLattice(2, 0.5, 4),
                                     nullptr, 0.1, 10, RecordPolicy::terminal()),
                  InputError);
}

TEST_CASE("convergence experiment plumbing") {
  ConvergenceConfig cfg;
  cfg.length = kTwoPi;
  CHECK(reference_sites(cfg) == 512);
  CHECK(convergence_steps(cfg) == 6650);
  CHECK(convergence_steps(cfg) % cfg.records == 0);

  cfg.ladder = {8, 16, 32};
  cfg.ref_levels = 1;
  cfg.steps = 20;
  cfg.T = 0.1;
  cfg.jbar = 0;
  const auto p = parse_problem("a.1.1 = \"1 + 0.25*cos(x1)\"\nphi = \"sin(x1)\"\n", 1, 1);
  const auto res = run_convergence(build_hat1d(), p, cfg);
  CHECK(res.complete);
  CHECK(res.base.rows.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) CHECK(res.mixture.rows[i].error == res.base.rows[i].error);

  cfg.jbar = 1;
  cfg.samples = 1;
  cfg.seed = 4;
  const auto sp = parse_problem("a.1.1 = \"1\"\nsigma.1.1 = \"0.3\"\nphi = \"sin(x1)\"\n", 1, 1);
  const auto r1 = run_convergence(build_hat1d(), sp, cfg);
  const auto r2 = run_convergence(build_hat1d(), sp, cfg);
  CHECK(r1.base.to_csv() == r2.base.to_csv());
  CHECK(r1.mixture.to_csv() == r2.mixture.to_csv());

  cfg.ladder = {8, 16, 48};
  CHECK_THROWS_AS(run_convergence(build_hat1d(), p, cfg), InputError);
  cfg.ladder = {8, 16, 32};
  cfg.reference = ReferencePolicy::spectral;
  CHECK_THROWS_AS(run_convergence(build_triangle2d(), parse_problem("a.1.1=\"1\"\na.2.2=\"1\"\n", 2, 1), cfg),
                  InputError);
}
