#include "accelfem/lattice.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace afem;

TEST_CASE("torus construction") {
  const TorusLattice a(1, 0.25, 8);
  CHECK(a.length() == 2.0);
  CHECK(a.size() == 8);
  CHECK(TorusLattice(2, 0.5, 4).size() == 16);
  CHECK_THROWS_AS(TorusLattice(1, 0.25, 7), InputError);
  CHECK_THROWS_AS(TorusLattice(1, 0.25, 2), InputError);
  CHECK_THROWS_AS(TorusLattice(1, -0.25, 8), InputError);
  CHECK_THROWS_AS(TorusLattice(5, 0.25, 8), InputError);
}

TEST_CASE("index maps wrap periodically") {
  const TorusLattice l(2, 0.5, 4);
  for (Index s = 0; s < l.size(); ++s) CHECK(l.flat(l.multi_index(s)) == s);
  IntVec k(2);
  k << -1, 5;
  CHECK(l.multi_index(l.flat(k)) == IntVec((IntVec(2) << 3, 1).finished()));
  IntVec e(2);
  e << 1, 0;
  CHECK(l.neighbor(l.flat((IntVec(2) << 3, 2).finished()), e) == l.flat((IntVec(2) << 0, 2).finished()));
}

TEST_CASE("refinement nests the coarse sites") {
  const TorusLattice c(1, 0.5, 4);
  const TorusLattice f = c.refined();
  CHECK(f.h() == 0.25);
  CHECK(f.n() == 8);
  CHECK(f.refined().h() == 0.125);
  CHECK(c.levels_to(f.refined()) == 2);
  CHECK(c.levels_to(TorusLattice(1, 0.3, 8)) == -1);
  for (Index s = 0; s < c.size(); ++s) CHECK(f.coordinates(2 * s)[0] == c.coordinates(s)[0]);
}

TEST_CASE("restriction by injection") {
  const TorusLattice c(1, 0.5, 4);
  const TorusLattice f = c.refined().refined();
  GridFunction u(f);
  u.values.setConstant(3.0);
  CHECK((restrict_to(u, c).values.array() == 3.0).all());

  std::mt19937_64 rng(5);
  std::normal_distribution<double> nd;
  for (Index s = 0; s < f.size(); ++s) u.values[s] = std::sin(2 * M_PI * f.coordinates(s)[0] / f.length()) + nd(rng);
  const GridFunction direct = restrict_to(u, c);
  const GridFunction twice = restrict_to(restrict_to(u, c.refined()), c);
  CHECK(direct.values == twice.values);
  for (Index s = 0; s < c.size(); ++s) CHECK(direct.values[s] == u.values[4 * s]);

  GridFunction coarse(c);
  for (Index s = 0; s < c.size(); ++s) coarse.values[s] = nd(rng);
  GridFunction prolonged(f);
  for (Index s = 0; s < c.size(); ++s) prolonged.values[4 * s] = coarse.values[s];
  CHECK(restrict_to(prolonged, c).values == coarse.values);
  CHECK_THROWS_AS(restrict_to(u, TorusLattice(1, 0.3, 4)), InputError);
}

TEST_CASE("discrete L2 norm") {
  const TorusLattice l(1, 0.25, 8);
  GridFunction one(l);
  one.values.setOnes();
  CHECK(norm_0h(one) * norm_0h(one) == doctest::Approx(2.0));
  CHECK(norm_0h(GridFunction(l)) == 0.0);

  const TorusLattice l2(2, 0.125, 16);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> ud(-1, 1);
  GridFunction u(l2), v(l2);
  for (Index s = 0; s < l2.size(); ++s) {
    u.values[s] = ud(rng);
    v.values[s] = ud(rng);
  }
  long double acc = 0;
  for (Index s = 0; s < l2.size(); ++s) acc += static_cast<long double>(u.values[s]) * u.values[s];
  CHECK(norm_0h(u) * norm_0h(u) == doctest::Approx(static_cast<double>(acc) * 0.125 * 0.125).epsilon(1e-14));
  CHECK(std::abs(inner_0h(u, v)) <= norm_0h(u) * norm_0h(v));
  CHECK_THROWS_AS(inner_0h(u, GridFunction(l)), InputError);
}

TEST_CASE("grid function CSV") {
  const TorusLattice l(2, 0.5, 4);
  GridFunction u(l);
  u.values[5] = 0.1;
  const std::string csv = to_csv(u);
  CHECK(csv.rfind("i1,i2,x1,x2,value\n", 0) == 0);
  CHECK(csv.find("1,1,5.0000000000000000e-01,5.0000000000000000e-01,1.0000000000000001e-01\n") != std::string::npos);
  CHECK(csv.find('\r') == std::string::npos);
}
