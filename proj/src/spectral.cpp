#include "accelfem/spectral.hpp"

#include <Eigen/LU>

#include <cmath>
#include <numbers>

namespace afem {

namespace {

Eigen::VectorXd sample(const Expr& e, const TorusLattice& lattice, double t) {
  Eigen::VectorXd v(lattice.size());
  for (Index s = 0; s < lattice.size(); ++s) v[s] = e(lattice.coordinates(s), t);
  return v;
}

}  // namespace

Eigen::MatrixXd fourier_derivative(int n, double length) {
  if (n < 2 || n % 2 != 0) throw InputError("Fourier differentiation needs an even point count");
  const double h = 2.0 * std::numbers::pi / n;
  const double scale = 2.0 * std::numbers::pi / length;
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      if (j == k) continue;
      const int m = j - k;
      const double sign = (m % 2 == 0) ? 1.0 : -1.0;
      d(j, k) = scale * 0.5 * sign / std::tan(m * h / 2.0);
    }
  }
  return d;
}

Trajectory spectral_reference(const ProblemSpec& p, const TorusLattice& lattice, const NoisePath* noise, double T,
                              int steps, const RecordPolicy& record) {
  if (p.dim != 1 || lattice.dimension() != 1) throw InputError("spectral reference is one-dimensional only");
  if (steps < 1 || !(T > 0.0)) throw InputError("spectral reference needs T > 0 and steps >= 1");
  const double dt = T / steps;
  const Eigen::MatrixXd D = fourier_derivative(lattice.n(), lattice.length());
  const Index n = lattice.size();

  auto drift = [&](double t) {
    const Eigen::VectorXd a = sample(p.a_ij(0, 0), lattice, t);
    const Eigen::VectorXd b = sample(p.b[0], lattice, t);
    const Eigen::VectorXd c = sample(p.c, lattice, t);
    Eigen::MatrixXd op = D * a.asDiagonal() * D;
    op += b.asDiagonal() * D;
    op.diagonal() += c;
    return op;
  };

  Eigen::PartialPivLU<Eigen::MatrixXd> lu;
  double lu_time = -1.0;
  auto system = [&](double t) -> const Eigen::PartialPivLU<Eigen::MatrixXd>& {
    if (lu_time < 0.0 || (p.drift_depends_on_time() && lu_time != t)) {
      lu.compute(Eigen::MatrixXd::Identity(n, n) - dt * drift(t));
      lu_time = t;
    }
    return lu;
  };

  Trajectory traj;
  GridFunction u(lattice, sample(p.phi, lattice, 0.0));
  traj.sup_norm = norm_0h(u);
  if (record.records(0, steps)) {
    traj.times.push_back(0.0);
    traj.states.push_back(u);
  }
  for (int k = 0; k < steps; ++k) {
    const double t = k * dt;
    const double t_next = t + dt;
    Eigen::VectorXd rhs = u.values;
    if (!p.f.is_zero()) rhs += dt * sample(p.f, lattice, t_next);
    if (noise && p.has_noise()) {
      for (int rho = 0; rho < p.rho_max && rho < noise->rho_count(); ++rho) {
        const Eigen::VectorXd sigma = sample(p.sigma_ir(0, rho), lattice, t);
        const Eigen::VectorXd nu = sample(p.nu[rho], lattice, t);
        Eigen::VectorXd term = sigma.cwiseProduct(D * u.values) + nu.cwiseProduct(u.values);
        term += sample(p.g[rho], lattice, t);
        rhs += noise->increment(rho, k) * term;
      }
    }
    u.values = system(t_next).solve(rhs);
    if (!u.values.allFinite()) throw NumericalError("spectral reference: non-finite state at step " + std::to_string(k + 1));
    traj.sup_norm = std::max(traj.sup_norm, norm_0h(u));
    if (record.records(k + 1, steps)) {
      traj.times.push_back(k + 1 == steps ? T : (k + 1) * dt);
      traj.states.push_back(u);
    }
  }
  return traj;
}

}  // namespace afem
