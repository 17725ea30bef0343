#include "accelfem/experiment.hpp"

#include "accelfem/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>

namespace afem {

int reference_sites(const ConvergenceConfig& cfg) {
  return *std::max_element(cfg.ladder.begin(), cfg.ladder.end()) << cfg.ref_levels;
}

int convergence_steps(const ConvergenceConfig& cfg) {
  if (cfg.steps > 0) return cfg.steps;
  const double h_ref = cfg.length / reference_sites(cfg);
  const double dt = cfg.dt_factor * h_ref * h_ref;
  const int raw = static_cast<int>(std::ceil(cfg.T / dt - 1e-9));
  const int r = std::max(1, cfg.records);
  return ((raw + r - 1) / r) * r;
}

namespace {

void fill_reports(ConvergenceResult& res, const ConvergenceConfig& cfg) {
  res.base = ConvergenceReport{"base", {}, std::numeric_limits<double>::quiet_NaN()};
  res.mixture = ConvergenceReport{"mixture J=" + std::to_string(cfg.jbar), {}, std::numeric_limits<double>::quiet_NaN()};
  if (res.samples_done == 0) return;
  for (std::size_t i = 0; i < cfg.ladder.size(); ++i) {
    double sb = 0.0, sm = 0.0;
    for (int s = 0; s < res.samples_done; ++s) {
      sb += res.base_sq[i][s];
      sm += res.mixture_sq[i][s];
    }
    const double h = cfg.length / cfg.ladder[i];
    res.base.add(h, cfg.ladder[i], std::sqrt(sb / res.samples_done));
    res.mixture.add(h, cfg.ladder[i], std::sqrt(sm / res.samples_done));
  }
  auto safe_fit = [](ConvergenceReport& r) {
    try {
      r.fit();
    } catch (const Error&) {
      r.fitted_order = std::numeric_limits<double>::quiet_NaN();
    }
  };
  safe_fit(res.base);
  safe_fit(res.mixture);
}

}  // namespace

ConvergenceResult run_convergence(const FiniteElement& element, const ProblemSpec& problem,
                                  const ConvergenceConfig& cfg) {
  if (cfg.ladder.size() < 3) throw InputError("convergence ladder needs at least 3 meshes");
  if (!(cfg.length > 0.0)) throw InputError("torus length must be positive");
  if (cfg.samples < 1) throw InputError("samples must be >= 1");
  if (cfg.reference == ReferencePolicy::spectral && element.dimension() != 1)
    throw InputError("spectral reference is one-dimensional only");
  for (std::size_t i = 1; i < cfg.ladder.size(); ++i)
    if (cfg.ladder[i] != 2 * cfg.ladder[i - 1]) throw InputError("ladder meshes must double");

  ConvergenceResult res;
  res.plan = extrapolation_coefficients<double>(cfg.jbar, cfg.ratio);
  res.steps = convergence_steps(cfg);
  res.dt = cfg.T / res.steps;
  res.reference_n = reference_sites(cfg);
  res.base_sq.assign(cfg.ladder.size(), {});
  res.mixture_sq.assign(cfg.ladder.size(), {});

  const int d = element.dimension();
  const ElementRules rules(element, cfg.quad_degree);
  const ReferenceTensors tensors = compute_reference_tensors(rules);
  const double sign = cfg.signed_h < 0 ? -1.0 : 1.0;

  std::vector<int> sizes;
  for (int n : cfg.ladder)
    for (int j = 0; j <= cfg.jbar; ++j) sizes.push_back(n << j);
  if (cfg.reference == ReferencePolicy::fine) sizes.push_back(res.reference_n);
  std::sort(sizes.begin(), sizes.end());
  sizes.erase(std::unique(sizes.begin(), sizes.end()), sizes.end());

  std::map<int, std::unique_ptr<AssembledProblem>> assembled;
  const RecordPolicy record = RecordPolicy::every(res.steps / std::max(1, cfg.records));

  try {
    for (int n : sizes) {
      const TorusLattice lattice(d, cfg.length / n, n);
      assembled[n] = std::make_unique<AssembledProblem>(rules, tensors, problem, lattice, sign * lattice.h());
    }
    for (int s = 0; s < cfg.samples; ++s) {
      std::unique_ptr<NoisePath> noise;
      if (problem.has_noise())
        noise = std::make_unique<NoisePath>(sample_seed(cfg.seed, static_cast<std::uint64_t>(s)), res.steps, res.dt,
                                            problem.rho_max);
      std::map<int, Trajectory> traj;
      for (int n : sizes) traj[n] = integrate(*assembled[n], noise.get(), cfg.T, res.steps, record, cfg.solver);
      Trajectory reference;
      if (cfg.reference == ReferencePolicy::fine) {
        reference = traj[res.reference_n];
      } else {
        const TorusLattice lattice(d, cfg.length / res.reference_n, res.reference_n);
        reference = spectral_reference(problem, lattice, noise.get(), cfg.T, res.steps, record);
      }
      for (std::size_t i = 0; i < cfg.ladder.size(); ++i) {
        const int n = cfg.ladder[i];
        double eb = 0.0, em = 0.0;
        for (std::size_t k = 0; k < reference.states.size(); ++k) {
          const GridFunction& u = traj[n].states[k];
          const double b = error_norm(u, reference.states[k]);
          std::vector<GridFunction> levels;
          for (int j = 0; j <= cfg.jbar; ++j) levels.push_back(traj[n << j].states[k]);
          const double m = error_norm(combine(levels, res.plan.c), reference.states[k]);
          eb = std::max(eb, b * b);
          em = std::max(em, m * m);
        }
        res.base_sq[i].push_back(eb);
        res.mixture_sq[i].push_back(em);
      }
      res.samples_done = s + 1;
    }
    res.complete = true;
  } catch (const Error& e) {
    res.failure = e.what();
    for (auto& v : res.base_sq) v.resize(static_cast<std::size_t>(res.samples_done));
    for (auto& v : res.mixture_sq) v.resize(static_cast<std::size_t>(res.samples_done));
  }
  fill_reports(res, cfg);
  return res;
}

}  // namespace afem
