#include "accelfem/assembly.hpp"
#include "accelfem/assumptions.hpp"
#include "support.hpp"

#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <cmath>
#include <numbers>
#include <random>

using namespace afem;
using afem::test::iv;
using afem::test::offset_column;

namespace {

constexpr double kTwoPi = 2 * std::numbers::pi;

struct Setup {
  FiniteElement element;
  ElementRules rules;
  ReferenceTensors tensors;
  explicit Setup(FiniteElement e) : element(std::move(e)), rules(element), tensors(compute_reference_tensors(rules)) {}
};

TorusLattice torus(int d, int n, double L = kTwoPi) { return TorusLattice(d, L / n, n); }

Eigen::VectorXd sample(const TorusLattice& l, auto&& f) {
  Eigen::VectorXd v(l.size());
  for (Index s = 0; s < l.size(); ++s) v[s] = f(l.coordinates(s));
  return v;
}

}  // namespace

TEST_CASE("mass stencil of the hat element") {
  const Setup s(build_hat1d());
  const auto lat = torus(1, 16);
  const auto mass = assemble_mass(Discretisation(s.rules, lat, lat.h()), s.tensors);

  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(lat.size());
  CHECK((mass.apply(ones) - ones).cwiseAbs().maxCoeff() < 1e-15);

  Eigen::VectorXd spike = Eigen::VectorXd::Zero(lat.size());
  spike[0] = 1.0;
  const Eigen::VectorXd r = mass.apply(spike);
  CHECK(r[15] == doctest::Approx(1.0 / 6.0).epsilon(1e-14));
  CHECK(r[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
  CHECK(r[1] == doctest::Approx(1.0 / 6.0).epsilon(1e-14));
  CHECK(r.segment(2, 13).cwiseAbs().maxCoeff() == 0.0);

  const Eigen::MatrixXd dense = mass.to_dense();
  CHECK((dense - dense.transpose()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("mass matrix is symmetric for every preset") {
  for (const char* name : {"triangle2d", "tensor(2)"}) {
    CAPTURE(name);
    const Setup s(build_element(name));
    const auto lat = torus(2, 8);
    const Eigen::MatrixXd m = assemble_mass(Discretisation(s.rules, lat, lat.h()), s.tensors).to_dense();
    CHECK((m - m.transpose()).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("constant-coefficient drift is the discrete Laplacian") {
  const Setup s(build_hat1d());
  const auto lat = torus(1, 32);
  const double h = lat.h();
  const Discretisation disc(s.rules, lat, h);
  const auto op = assemble_drift(disc, parse_problem("a.1.1 = \"1\"\n", 1, 1), 0.0);
  for (Index site = 0; site < lat.size(); ++site) {
    CHECK(op.coeffs()(site, offset_column(op, iv({-1}))) == doctest::Approx(1 / (h * h)).epsilon(1e-13));
    CHECK(op.coeffs()(site, offset_column(op, iv({0}))) == doctest::Approx(-2 / (h * h)).epsilon(1e-13));
    CHECK(op.coeffs()(site, offset_column(op, iv({1}))) == doctest::Approx(1 / (h * h)).epsilon(1e-13));
  }
  const Eigen::VectorXd u = sample(lat, [](const Point& x) { return std::sin(x[0]); });
  CHECK((op.apply(u) + u).cwiseAbs().maxCoeff() <= h * h / 12 + 1e-10);
  CHECK(op.apply(Eigen::VectorXd::Ones(lat.size())).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("second-order drift annihilates constants for every element") {
  for (const char* name : {"triangle2d", "tensor(2)"}) {
    CAPTURE(name);
    const Setup s(build_element(name));
    const auto lat = torus(2, 8);
    const auto p = parse_problem("a.1.1 = \"1 + 0.3*sin(x2)\"\na.1.2 = \"0.2*cos(x1)\"\na.2.2 = \"1.5\"\n", 2, 1);
    const auto op = assemble_drift(Discretisation(s.rules, lat, lat.h()), p, 0.0);
    const double scale = op.coeffs().cwiseAbs().maxCoeff();
    CHECK(op.apply(Eigen::VectorXd::Ones(lat.size())).cwiseAbs().maxCoeff() < 1e-13 * scale);
  }
}

TEST_CASE("zeroth-order and noise stencils") {
  const Setup s(build_hat1d());
  const auto lat = torus(1, 16);
  const double h = lat.h();
  const Discretisation disc(s.rules, lat, h);
  const auto mass = assemble_mass(disc, s.tensors);

  const auto c_only = assemble_drift(disc, parse_problem("a.1.1 = \"0\"\nc = \"1\"\n", 1, 1), 0.0);
  CHECK((c_only.coeffs() - mass.coeffs()).cwiseAbs().maxCoeff() < 1e-15);

  const auto nu_only = assemble_noise(disc, parse_problem("a.1.1 = \"1\"\nnu.1 = \"1\"\n", 1, 1), 0.0, 0);
  CHECK((nu_only.coeffs() - mass.coeffs()).cwiseAbs().maxCoeff() < 1e-15);

  const auto sig = assemble_noise(disc, parse_problem("a.1.1 = \"1\"\nsigma.1.1 = \"1\"\n", 1, 1), 0.0, 0);
  CHECK(sig.coeffs()(3, offset_column(sig, iv({1}))) == doctest::Approx(0.5 / h).epsilon(1e-13));
  CHECK(std::abs(sig.coeffs()(3, offset_column(sig, iv({0})))) < 1e-13);
  CHECK(sig.coeffs()(3, offset_column(sig, iv({-1}))) == doctest::Approx(-0.5 / h).epsilon(1e-13));
  CHECK(sig.apply(Eigen::VectorXd::Ones(lat.size())).cwiseAbs().maxCoeff() < 1e-13);

  const auto zero = assemble_noise(disc, parse_problem("a.1.1 = \"1\"\n", 1, 1), 0.0, 0);
  CHECK(zero.apply(Eigen::VectorXd::Random(lat.size())).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("mollified data") {
  const Setup s(build_hat1d());
  const double L = 4.0;
  const auto lat = TorusLattice(1, L / 32, 32);
  const double h = lat.h();
  const Discretisation disc(s.rules, lat, h);
  const auto one = mollify(disc, Expr::parse("1"), 0.0);
  CHECK((one.values.array() - 1.0).abs().maxCoeff() < 1e-15);

  // second moment of the hat, by a midpoint rule
  double m2 = 0.0;
  const int cells = 200000;
  for (int k = 0; k < cells; ++k) {
    const double z = -1.0 + (k + 0.5) * 2.0 / cells;
    m2 += z * z * (1 - std::abs(z)) * 2.0 / cells;
  }
  CHECK(m2 == doctest::Approx(1.0 / 6.0).epsilon(1e-9));

  const auto lin = mollify(disc, Expr::parse("x1"), 0.0);
  const auto quad = mollify(disc, Expr::parse("x1^2"), 0.0);
  for (Index site = 2; site + 2 < lat.size(); ++site) {
    const double x = lat.coordinates(site)[0];
    CHECK(lin.values[site] == doctest::Approx(x).epsilon(1e-14));
    CHECK(std::abs(quad.values[site] - (x * x + h * h / 6.0)) < 1e-14 * (1 + x * x));
  }
}

TEST_CASE("stencil application matches a dense matrix product") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> ud(-1, 1);
  const TorusLattice lat(2, 0.25, 6);
  std::vector<IntVec> offsets{iv({0, 0}), iv({1, 0}), iv({-1, 2}), iv({3, -1})};
  Eigen::MatrixXd coeffs(lat.size(), 4);
  for (Index i = 0; i < coeffs.size(); ++i) coeffs.data()[i] = ud(rng);
  const StencilOperator op(lat, offsets, coeffs);

  Eigen::MatrixXd dense = Eigen::MatrixXd::Zero(lat.size(), lat.size());
  for (Index site = 0; site < lat.size(); ++site) {
    for (std::size_t k = 0; k < offsets.size(); ++k) {
      IntVec target = lat.multi_index(site) + offsets[k];
      for (int a = 0; a < 2; ++a) target[a] = ((target[a] % 6) + 6) % 6;
      dense(site, target[0] + 6 * target[1]) += coeffs(site, static_cast<Index>(k));
    }
  }
  Eigen::VectorXd u(lat.size());
  for (Index i = 0; i < u.size(); ++i) u[i] = ud(rng);
  CHECK((op.apply(u) - dense * u).cwiseAbs().maxCoeff() < 1e-13);
  CHECK((op.to_dense() - dense).cwiseAbs().maxCoeff() < 1e-15);
  CHECK((Eigen::MatrixXd(op.to_sparse()) - dense).cwiseAbs().maxCoeff() < 1e-15);

  const Eigen::VectorXd v = Eigen::VectorXd::Random(lat.size());
  CHECK((op.apply(2.0 * u - 3.0 * v) - (2.0 * op.apply(u) - 3.0 * op.apply(v))).cwiseAbs().maxCoeff() < 1e-13);

  const auto twice = StencilOperator::combine(1.0, op, 1.0, op);
  CHECK((twice.apply(u) - 2.0 * op.apply(u)).cwiseAbs().maxCoeff() < 1e-13);
  CHECK(StencilOperator(lat, offsets, Eigen::MatrixXd::Zero(lat.size(), 4)).apply(u).isZero(0.0));
}

TEST_CASE("stencil CSV") {
  const TorusLattice lat(1, 0.5, 4);
  const StencilOperator op(lat, {iv({0}), iv({1})}, Eigen::MatrixXd::Constant(4, 2, 0.25));
  const std::string csv = op.to_csv();
  CHECK(csv.rfind("site,offset1,coefficient\n", 0) == 0);
  CHECK(csv.find("3,1,2.5000000000000000e-01\n") != std::string::npos);
}

TEST_CASE("negative spacing assembles identical stencils") {
  SUBCASE("hat1d") {
    const Setup s(build_hat1d());
    const auto lat = torus(1, 16);
    const auto p = parse_problem(
        "a.1.1 = \"1 + 0.25*cos(x1)\"\nb.1 = \"0.3*sin(x1)\"\nc = \"-0.2 + cos(2*x1)\"\n"
        "sigma.1.1 = \"0.4*cos(x1)\"\nnu.1 = \"0.1*sin(x1)\"\nf = \"sin(x1)\"\nphi = \"exp(sin(x1))\"\n",
        1, 1);
    const Discretisation plus(s.rules, lat, lat.h()), minus(s.rules, lat, -lat.h());
    CHECK(assemble_mass(plus, s.tensors) == assemble_mass(minus, s.tensors));
    CHECK(assemble_drift(plus, p, 0.1) == assemble_drift(minus, p, 0.1));
    CHECK(assemble_noise(plus, p, 0.1, 0) == assemble_noise(minus, p, 0.1, 0));
    CHECK(mollify(plus, p.phi, 0.0).values == mollify(minus, p.phi, 0.0).values);
  }
  SUBCASE("triangle2d") {
    const Setup s(build_triangle2d());
    const auto lat = torus(2, 8);
    const auto p = parse_problem(
        "a.1.1 = \"1 + 0.25*cos(x1)\"\na.1.2 = \"0.1*sin(x2)\"\na.2.2 = \"1.2\"\nb.2 = \"0.3*sin(x1)\"\n"
        "sigma.1.1 = \"0.2\"\nsigma.2.1 = \"0.1*cos(x2)\"\nphi = \"sin(x1)*cos(x2)\"\n",
        2, 1);
    const Discretisation plus(s.rules, lat, lat.h()), minus(s.rules, lat, -lat.h());
    CHECK(assemble_drift(plus, p, 0.0) == assemble_drift(minus, p, 0.0));
    CHECK(assemble_noise(plus, p, 0.0, 0) == assemble_noise(minus, p, 0.0, 0));
    CHECK(mollify(plus, p.phi, 0.0).values == mollify(minus, p.phi, 0.0).values);
  }
  const Setup s(build_hat1d());
  CHECK_THROWS_AS(Discretisation(s.rules, torus(1, 16), 0.1), InputError);
}

TEST_CASE("drift is second-order consistent") {
  const Setup s(build_hat1d());
  const auto p = parse_problem("a.1.1 = \"1\"\nb.1 = \"0.5*cos(x1)\"\nc = \"sin(x1)\"\n", 1, 1);
  // u = sin(2x): Lu = -4 sin 2x + cos x * cos 2x + sin x sin 2x
  auto error = [&](int n) {
    const auto lat = torus(1, n);
    const auto op = assemble_drift(Discretisation(s.rules, lat, lat.h()), p, 0.0);
    const Eigen::VectorXd u = sample(lat, [](const Point& x) { return std::sin(2 * x[0]); });
    const Eigen::VectorXd lu = sample(lat, [](const Point& x) {
      return -4 * std::sin(2 * x[0]) + std::cos(x[0]) * std::cos(2 * x[0]) + std::sin(x[0]) * std::sin(2 * x[0]);
    });
    return (op.apply(u) - lu).cwiseAbs().maxCoeff();
  };
  const double e1 = error(32), e2 = error(64), e3 = error(128);
  CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.1));
  CHECK(e2 / e3 == doctest::Approx(4.0).epsilon(0.1));
}

TEST_CASE("mass matrix eigenvalues are bounded below by delta") {
  for (const char* name : {"hat1d", "triangle2d", "tensor(2)"}) {
    CAPTURE(name);
    const Setup s(build_element(name));
    const double delta = check_invertibility(s.tensors);
    const int d = s.element.dimension();
    const auto lat = torus(d, d == 1 ? 64 : 16);
    const Eigen::MatrixXd m = assemble_mass(Discretisation(s.rules, lat, lat.h()), s.tensors).to_dense();
    const double lo = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(m, Eigen::EigenvaluesOnly).eigenvalues()[0];
    CHECK(lo >= delta - 1e-10);
  }
}

TEST_CASE("assembled problem caches time-independent pieces") {
  const Setup s(build_hat1d());
  const auto lat = torus(1, 16);
  const auto fixed = parse_problem("a.1.1 = \"1\"\nf = \"sin(x1)\"\nphi = \"cos(x1)\"\n", 1, 1);
  AssembledProblem ap(s.rules, s.tensors, fixed, lat, lat.h());
  const StencilOperator* first = &ap.drift(0.0);
  CHECK(first == &ap.drift(0.7));
  CHECK(ap.f(0.0).values == ap.f(0.3).values);
  CHECK(ap.initial_data().values == mollify(Discretisation(s.rules, lat, lat.h()), fixed.phi, 0.0).values);

  const auto moving = parse_problem("a.1.1 = \"1 + t\"\n", 1, 1);
  AssembledProblem mp(s.rules, s.tensors, moving, lat, lat.h());
  CHECK(mp.drift_time_dependent());
  const Eigen::MatrixXd c0 = mp.drift(0.0).coeffs();
  CHECK(mp.drift(1.0).coeffs().isApprox(2.0 * c0));
  CHECK(mp.drift(1.0).time() == 1.0);
}
