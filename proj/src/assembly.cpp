#include "accelfem/assembly.hpp"

#include "accelfem/keyvalue.hpp"

#include <cmath>

namespace afem {

namespace {

double wrap(double y, double length) {
  double r = y - length * std::floor(y / length);
  if (r >= length) r -= length;
  return r;
}

Point sample_point(const Point& x, double h, const Point& z, double length) {
  Point y(x.size());
  for (Index i = 0; i < x.size(); ++i) y[i] = wrap(x[i] + h * z[i], length);
  return y;
}

double eval_at(const Expr& e, const Point& y, double t, const char* what, Index site) {
  try {
    return e(y, t);
  } catch (const ExprError& err) {
    throw NumericalError(std::string(what) + " at site " + std::to_string(site) + ": " + err.what());
  }
}

std::vector<IntVec> lattice_offsets(const Discretisation& disc) { return disc.rules->element().gamma(); }

/// Rule for lattice offset mu.
const OverlapRule& rule_for(const Discretisation& disc, const IntVec& mu) {
  const IntVec lambda = disc.h < 0 ? IntVec(-mu) : mu;
  const auto g = disc.rules->element().gamma_index(lambda);
  if (!g) throw GeometryError("neighbour set is not symmetric; cannot assemble with negative h");
  return disc.rules->rule(*g);
}

}  // namespace

StencilOperator::StencilOperator(const TorusLattice& lattice, std::vector<IntVec> offsets, Eigen::MatrixXd coeffs,
                                 double time)
    : lattice_(lattice), offsets_(std::move(offsets)), coeffs_(std::move(coeffs)), time_(time) {
  const Index m = static_cast<Index>(offsets_.size());
  if (coeffs_.rows() != lattice_.size() || coeffs_.cols() != m)
    throw InputError("stencil coefficient table has the wrong shape");
  neighbours_.resize(lattice_.size(), m);
  for (Index s = 0; s < lattice_.size(); ++s)
    for (Index k = 0; k < m; ++k) neighbours_(s, k) = lattice_.neighbor(s, offsets_[k]);
}

Eigen::VectorXd StencilOperator::apply(const Eigen::VectorXd& u) const {
  if (u.size() != lattice_.size()) throw InputError("stencil applied to a field of the wrong size");
  Eigen::VectorXd v(lattice_.size());
  const Index m = coeffs_.cols();
  for (Index s = 0; s < lattice_.size(); ++s) {
    double acc = 0.0;
    for (Index k = 0; k < m; ++k) acc += coeffs_(s, k) * u[neighbours_(s, k)];
    v[s] = acc;
  }
  return v;
}

GridFunction StencilOperator::apply(const GridFunction& u) const {
  if (u.lattice != lattice_) throw InputError("stencil applied to a field on a different lattice");
  return GridFunction(lattice_, apply(u.values));
}

Eigen::SparseMatrix<double> StencilOperator::to_sparse() const {
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<std::size_t>(coeffs_.size()));
  for (Index s = 0; s < lattice_.size(); ++s)
    for (Index k = 0; k < coeffs_.cols(); ++k) trips.emplace_back(s, neighbours_(s, k), coeffs_(s, k));
  Eigen::SparseMatrix<double> m(lattice_.size(), lattice_.size());
  m.setFromTriplets(trips.begin(), trips.end());
  return m;
}

Eigen::MatrixXd StencilOperator::to_dense() const {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(lattice_.size(), lattice_.size());
  for (Index s = 0; s < lattice_.size(); ++s)
    for (Index k = 0; k < coeffs_.cols(); ++k) m(s, neighbours_(s, k)) += coeffs_(s, k);
  return m;
}

StencilOperator StencilOperator::combine(double alpha, const StencilOperator& a, double beta,
                                         const StencilOperator& b) {
  if (a.lattice_ != b.lattice_ || a.offsets_ != b.offsets_)
    throw InputError("combining stencils with different lattices or offsets");
  return StencilOperator(a.lattice_, a.offsets_, alpha * a.coeffs_ + beta * b.coeffs_, a.time_);
}

std::string StencilOperator::to_csv() const {
  const int d = lattice_.dimension();
  std::string out = "site,";
  for (int i = 1; i <= d; ++i) out += "offset" + std::to_string(i) + ",";
  out += "coefficient\n";
  for (Index s = 0; s < lattice_.size(); ++s) {
    for (Index k = 0; k < coeffs_.cols(); ++k) {
      out += std::to_string(s) + ",";
      for (int i = 0; i < d; ++i) out += std::to_string(offsets_[k][i]) + ",";
      out += format_real(coeffs_(s, k)) + "\n";
    }
  }
  return out;
}

bool operator==(const StencilOperator& a, const StencilOperator& b) {
  return a.lattice_ == b.lattice_ && a.offsets_ == b.offsets_ && a.coeffs_ == b.coeffs_;
}

Discretisation::Discretisation(const ElementRules& r, const TorusLattice& l, double signed_h)
    : rules(&r), lattice(l), h(signed_h) {
  if (std::abs(signed_h) != l.h()) throw InputError("|h| must equal the lattice spacing");
  if (l.dimension() != r.element().dimension()) throw InputError("element and lattice dimensions differ");
}

StencilOperator assemble_mass(const Discretisation& disc, const ReferenceTensors& tensors) {
  const auto offsets = lattice_offsets(disc);
  Eigen::MatrixXd coeffs(disc.lattice.size(), static_cast<Index>(offsets.size()));
  for (std::size_t k = 0; k < offsets.size(); ++k) {
    const IntVec lambda = disc.h < 0 ? IntVec(-offsets[k]) : offsets[k];
    coeffs.col(static_cast<Index>(k)).setConstant(tensors.r(lambda));
  }
  return StencilOperator(disc.lattice, offsets, std::move(coeffs));
}

StencilOperator assemble_drift(const Discretisation& disc, const ProblemSpec& problem, double t) {
  const int d = disc.lattice.dimension();
  const double h = disc.h;
  const double h2 = h * h;
  const double length = disc.lattice.length();
  const auto offsets = lattice_offsets(disc);
  bool has_b = false;
  for (const auto& e : problem.b) has_b = has_b || !e.is_zero();
  const bool has_c = !problem.c.is_zero();

  Eigen::MatrixXd coeffs(disc.lattice.size(), static_cast<Index>(offsets.size()));
  for (Index s = 0; s < disc.lattice.size(); ++s) {
    const Point x = disc.lattice.coordinates(s);
    for (std::size_t k = 0; k < offsets.size(); ++k) {
      const OverlapRule& rule = rule_for(disc, offsets[k]);
      double A = 0.0, B = 0.0, C = 0.0;
      A = rule.integrate([&](const OverlapNode& n) {
        const Point y = sample_point(x, h, n.z, length);
        double acc = 0.0;
        for (int i = 0; i < d; ++i)
          for (int j = 0; j < d; ++j) {
            const Expr& a = problem.a_ij(i, j);
            if (a.is_zero()) continue;
            acc += eval_at(a, y, t, "a", s) * n.grad_shift[j] * n.grad[i];
          }
        return -(n.w * acc);
      });
      if (has_b) {
        B = rule.integrate([&](const OverlapNode& n) {
          const Point y = sample_point(x, h, n.z, length);
          double acc = 0.0;
          for (int i = 0; i < d; ++i) {
            if (problem.b[i].is_zero()) continue;
            acc += eval_at(problem.b[i], y, t, "b", s) * n.grad_shift[i];
          }
          return n.w * acc * n.psi;
        });
      }
      if (has_c) {
        C = rule.integrate([&](const OverlapNode& n) {
          const Point y = sample_point(x, h, n.z, length);
          return n.w * eval_at(problem.c, y, t, "c", s) * n.psi_shift * n.psi;
        });
      }
      coeffs(s, static_cast<Index>(k)) = A / h2 + B / h + C;
    }
  }
  return StencilOperator(disc.lattice, offsets, std::move(coeffs), t);
}

StencilOperator assemble_noise(const Discretisation& disc, const ProblemSpec& problem, double t, int rho) {
  if (rho < 0 || rho >= problem.rho_max) throw InputError("noise index out of range");
  const int d = disc.lattice.dimension();
  const double h = disc.h;
  const double length = disc.lattice.length();
  const auto offsets = lattice_offsets(disc);
  bool has_sigma = false;
  for (int i = 0; i < d; ++i) has_sigma = has_sigma || !problem.sigma_ir(i, rho).is_zero();
  const Expr& nu = problem.nu[rho];

  Eigen::MatrixXd coeffs = Eigen::MatrixXd::Zero(disc.lattice.size(), static_cast<Index>(offsets.size()));
  if (!has_sigma && nu.is_zero()) return StencilOperator(disc.lattice, offsets, std::move(coeffs), t);
  for (Index s = 0; s < disc.lattice.size(); ++s) {
    const Point x = disc.lattice.coordinates(s);
    for (std::size_t k = 0; k < offsets.size(); ++k) {
      const OverlapRule& rule = rule_for(disc, offsets[k]);
      double S = 0.0, N = 0.0;
      if (has_sigma) {
        S = rule.integrate([&](const OverlapNode& n) {
          const Point y = sample_point(x, h, n.z, length);
          double acc = 0.0;
          for (int i = 0; i < d; ++i) {
            const Expr& sg = problem.sigma_ir(i, rho);
            if (sg.is_zero()) continue;
            acc += eval_at(sg, y, t, "sigma", s) * n.grad_shift[i];
          }
          return n.w * acc * n.psi;
        });
      }
      if (!nu.is_zero()) {
        N = rule.integrate([&](const OverlapNode& n) {
          const Point y = sample_point(x, h, n.z, length);
          return n.w * eval_at(nu, y, t, "nu", s) * n.psi_shift * n.psi;
        });
      }
      coeffs(s, static_cast<Index>(k)) = S / h + N;
    }
  }
  return StencilOperator(disc.lattice, offsets, std::move(coeffs), t);
}

GridFunction mollify(const Discretisation& disc, const Expr& field, double t) {
  GridFunction out(disc.lattice);
  if (field.is_zero()) return out;
  const OverlapRule& rule = disc.rules->support_rule();
  const double length = disc.lattice.length();
  for (Index s = 0; s < disc.lattice.size(); ++s) {
    const Point x = disc.lattice.coordinates(s);
    out.values[s] = rule.integrate([&](const OverlapNode& n) {
      return n.w * eval_at(field, sample_point(x, disc.h, n.z, length), t, "data", s) * n.psi;
    });
  }
  return out;
}

AssembledProblem::AssembledProblem(const ElementRules& rules, const ReferenceTensors& tensors,
                                   const ProblemSpec& problem, const TorusLattice& lattice, double signed_h)
    : disc_(rules, lattice, signed_h),
      problem_(&problem),
      mass_(assemble_mass(disc_, tensors)),
      phi_h_(mollify(disc_, problem.phi, 0.0)),
      noise_(static_cast<std::size_t>(problem.rho_max)),
      g_(static_cast<std::size_t>(problem.rho_max)) {
  if (problem.dim != lattice.dimension()) throw InputError("problem and lattice dimensions differ");
}

const StencilOperator& AssembledProblem::drift(double t) {
  if (!drift_ || (problem_->drift_depends_on_time() && drift_->time() != t)) drift_ = assemble_drift(disc_, *problem_, t);
  return *drift_;
}

const StencilOperator& AssembledProblem::noise(double t, int rho) {
  auto& slot = noise_.at(static_cast<std::size_t>(rho));
  if (!slot || (problem_->noise_depends_on_time() && slot->time() != t)) slot = assemble_noise(disc_, *problem_, t, rho);
  return *slot;
}

GridFunction AssembledProblem::f(double t) {
  if (problem_->f.depends_on_time()) return mollify(disc_, problem_->f, t);
  if (!f_) f_ = mollify(disc_, problem_->f, t);
  return *f_;
}

GridFunction AssembledProblem::g(double t, int rho) {
  const Expr& e = problem_->g.at(static_cast<std::size_t>(rho));
  if (e.depends_on_time()) return mollify(disc_, e, t);
  auto& slot = g_[static_cast<std::size_t>(rho)];
  if (!slot) slot = mollify(disc_, e, t);
  return *slot;
}

}  // namespace afem
