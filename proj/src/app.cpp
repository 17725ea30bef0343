#include "accelfem/app.hpp"

#include "accelfem/assumptions.hpp"
#include "accelfem/experiment.hpp"
#include "accelfem/keyvalue.hpp"
#include "accelfem/spectral.hpp"

#include <cmath>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <ostream>

namespace afem {

namespace fs = std::filesystem;

namespace {

template <typename F>
int guarded(std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const SolverError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const InputError& e) {
    err << "input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const GeometryError& e) {
    err << "input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const fs::filesystem_error& e) {
    err << "input error: " << e.what() << "\n";
    return kExitInput;
  }
}

FiniteElement load_element(const RunConfig& cfg) {
  if (!cfg.element_file.empty()) return load_element_file(cfg.element_file);
  return build_element(cfg.preset);
}

ProblemSpec load_problem(const RunConfig& cfg, int dim) {
  if (cfg.problem_file.empty()) throw InputError("--problem is required");
  return load_problem_file(cfg.problem_file, dim, cfg.rho_max);
}

double ratio_value(const std::string& r) {
  if (r == "quarter") return 0.25;
  if (r == "sixteenth") return 0.0625;
  throw InputError("--ratio must be 'quarter' or 'sixteenth'");
}

RecordPolicy parse_record(const std::string& r) {
  if (r == "terminal") return RecordPolicy::terminal();
  if (r == "all") return RecordPolicy::all();
  if (r.rfind("every:", 0) == 0) {
    const double k = parse_real(r.substr(6));
    if (k < 1 || k != std::floor(k)) throw InputError("record stride must be a positive integer");
    return RecordPolicy::every(static_cast<int>(k));
  }
  throw InputError("--record must be terminal, all or every:K");
}

SolverConfig solver_of(const RunConfig& cfg) {
  SolverConfig s;
  s.tol = cfg.tol;
  s.max_iter = cfg.max_iter;
  return s;
}

std::string make_run_dir(const RunConfig& cfg) {
  const fs::path base = output_base(cfg);
  fs::create_directories(base);
  const std::time_t now = std::time(nullptr);
  char stamp[32];
  std::strftime(stamp, sizeof stamp, "%Y%m%d-%H%M%S", std::localtime(&now));
  const std::string stem = cfg.command + "-" + stamp;
  fs::path dir = base / stem;
  for (int k = 1; fs::exists(dir); ++k) dir = base / (stem + "-" + std::to_string(k));
  fs::create_directories(dir);
  return dir.string();
}

/// Copies inputs into the run directory and writes the manifest.
void write_manifest(RunConfig cfg, const std::string& dir) {
  if (!cfg.element_file.empty()) {
    write_text_file((fs::path(dir) / "element.txt").string(), read_text_file(cfg.element_file));
    cfg.element_file = "element.txt";
  }
  if (!cfg.problem_file.empty()) {
    write_text_file((fs::path(dir) / "problem.txt").string(), read_text_file(cfg.problem_file));
    cfg.problem_file = "problem.txt";
  }
  write_text_file((fs::path(dir) / "manifest.txt").string(), format_manifest(cfg));
}

std::string join_ints(const std::vector<int>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s;
}

int to_int(const std::string& key, const std::string& v) {
  const double x = parse_real(v);
  if (x != std::floor(x) || std::abs(x) > 2e9) throw InputError("manifest: " + key + " must be an integer");
  return static_cast<int>(x);
}

}  // namespace

double parse_length(const std::string& expr) {
  const Expr e = Expr::parse(expr);
  if (!e.is_constant()) throw InputError("--L must be a constant expression");
  const double L = e(Point::Zero(1), 0.0);
  if (!(L > 0.0)) throw InputError("--L must be positive");
  return L;
}

std::string output_base(const RunConfig& cfg) {
  if (!cfg.out.empty()) return cfg.out;
  if (const char* env = std::getenv("ACCELFEM_OUT"); env && *env) return env;
  return "runs";
}

std::string format_manifest(const RunConfig& c) {
  std::string m;
  auto kv = [&](const std::string& k, const std::string& v) { m += k + " = " + quote_value(v) + "\n"; };
  kv("command", c.command);
  kv("preset", c.preset);
  kv("element_file", c.element_file);
  kv("problem_file", c.problem_file);
  kv("L", c.L);
  kv("L_value", format_real(parse_length(c.L)));
  kv("n", std::to_string(c.n));
  kv("T", format_real(c.T));
  kv("steps", std::to_string(c.steps));
  kv("seed", std::to_string(c.seed));
  kv("samples", std::to_string(c.samples));
  kv("rho_max", std::to_string(c.rho_max));
  kv("jbar", std::to_string(c.jbar));
  kv("ratio", c.ratio);
  kv("tol", format_real(c.tol));
  kv("max_iter", std::to_string(c.max_iter));
  kv("quad_order", std::to_string(c.quad_order));
  kv("levels", join_ints(c.levels));
  kv("dt_factor", format_real(c.dt_factor));
  kv("reference", c.reference);
  kv("ref_levels", std::to_string(c.ref_levels));
  kv("records", std::to_string(c.records));
  kv("record", c.record);
  kv("h_sign", std::to_string(c.h_sign));
  kv("svg", c.svg ? "1" : "0");
  return m;
}

RunConfig parse_manifest(const std::string& text, const std::string& manifest_dir) {
  RunConfig c;
  for (const auto& [k, v, line] : parse_key_values(text)) {
    if (k == "command") c.command = v;
    else if (k == "preset") c.preset = v;
    else if (k == "element_file") c.element_file = v.empty() ? v : (fs::path(manifest_dir) / v).string();
    else if (k == "problem_file") c.problem_file = v.empty() ? v : (fs::path(manifest_dir) / v).string();
    else if (k == "L") c.L = v;
    else if (k == "L_value") continue;
    else if (k == "n") c.n = to_int(k, v);
    else if (k == "T") c.T = parse_real(v);
    else if (k == "steps") c.steps = to_int(k, v);
    else if (k == "seed") c.seed = std::stoull(v);
    else if (k == "samples") c.samples = to_int(k, v);
    else if (k == "rho_max") c.rho_max = to_int(k, v);
    else if (k == "jbar") c.jbar = to_int(k, v);
    else if (k == "ratio") c.ratio = v;
    else if (k == "tol") c.tol = parse_real(v);
    else if (k == "max_iter") c.max_iter = to_int(k, v);
    else if (k == "quad_order") c.quad_order = to_int(k, v);
    else if (k == "levels") {
      c.levels.clear();
      if (!v.empty())
        for (const auto& s : split(v, ',')) c.levels.push_back(to_int(k, s));
    } else if (k == "dt_factor") c.dt_factor = parse_real(v);
    else if (k == "reference") c.reference = v;
    else if (k == "ref_levels") c.ref_levels = to_int(k, v);
    else if (k == "records") c.records = to_int(k, v);
    else if (k == "record") c.record = v;
    else if (k == "h_sign") c.h_sign = to_int(k, v);
    else if (k == "svg") c.svg = v == "1";
    else throw InputError("manifest line " + std::to_string(line) + ": unknown key '" + k + "'");
  }
  if (c.command.empty()) throw InputError("manifest has no command");
  return c;
}

int cmd_verify_element(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const FiniteElement element = load_element(cfg);
    const AssumptionReport report = verify_element(element, cfg.quad_order);
    out << "element: " << element.name() << " (dimension " << element.dimension() << ", |Gamma| = "
        << element.gamma().size() << ")\n";
    out << "delta = " << format_real(report.delta_estimate) << "\n";
    out << report.table();
    return report.pass() ? kExitOk : kExitFail;
  });
}

int cmd_simulate(const RunConfig& cfg, std::ostream& out, std::ostream& err, std::string* run_dir) {
  return guarded(err, [&] {
    const FiniteElement element = load_element(cfg);
    const int d = element.dimension();
    const ProblemSpec problem = load_problem(cfg, d);
    const double L = parse_length(cfg.L);
    const TorusLattice lattice(d, L / cfg.n, cfg.n);
    if (!(cfg.T > 0.0)) throw InputError("--T must be positive");
    int steps = cfg.steps;
    if (steps <= 0) {
      if (!(cfg.dt_factor > 0.0)) throw InputError("--dt-factor must be positive");
      steps = static_cast<int>(std::ceil(cfg.T / (cfg.dt_factor * lattice.h() * lattice.h()) - 1e-9));
    }
    const RecordPolicy record = parse_record(cfg.record);

    const ElementRules rules(element, cfg.quad_order);
    const ReferenceTensors tensors = compute_reference_tensors(rules);
    AssembledProblem assembled(rules, tensors, problem, lattice, (cfg.h_sign < 0 ? -1.0 : 1.0) * lattice.h());
    std::unique_ptr<NoisePath> noise;
    if (problem.has_noise()) noise = std::make_unique<NoisePath>(cfg.seed, steps, cfg.T / steps, problem.rho_max);

    const std::string dir = make_run_dir(cfg);
    if (run_dir) *run_dir = dir;
    write_manifest(cfg, dir);
    const Trajectory traj = integrate(assembled, noise.get(), cfg.T, steps, record, solver_of(cfg));

    std::string csv = "t,";
    for (int i = 1; i <= d; ++i) csv += "i" + std::to_string(i) + ",";
    for (int i = 1; i <= d; ++i) csv += "x" + std::to_string(i) + ",";
    csv += "value\n";
    for (std::size_t k = 0; k < traj.states.size(); ++k) {
      const std::string body = to_csv(traj.states[k]);
      std::size_t pos = body.find('\n') + 1;
      while (pos < body.size()) {
        const std::size_t end = body.find('\n', pos);
        csv += format_real(traj.times[k]) + "," + body.substr(pos, end - pos + 1);
        pos = end + 1;
      }
    }
    write_text_file((fs::path(dir) / "trajectory.csv").string(), csv);
    write_text_file((fs::path(dir) / "terminal.csv").string(), to_csv(traj.terminal()));

    out << "run directory: " << dir << "\n";
    out << "sites: " << lattice.size() << ", h = " << format_real(lattice.h()) << ", steps = " << steps
        << ", dt = " << format_real(cfg.T / steps) << "\n";
    out << "terminal |U|_0h = " << format_real(norm_0h(traj.terminal())) << "\n";
    out << "sup_t |U|_0h = " << format_real(traj.sup_norm) << "\n";
    if (!problem.truncated.empty()) out << "noise terms beyond rho_max dropped: " << problem.truncated.size() << "\n";
    return kExitOk;
  });
}

int cmd_convergence(const RunConfig& cfg, std::ostream& out, std::ostream& err, std::string* run_dir) {
  return guarded(err, [&] {
    const FiniteElement element = load_element(cfg);
    const int d = element.dimension();
    const ProblemSpec problem = load_problem(cfg, d);

    ConvergenceConfig cc;
    cc.length = parse_length(cfg.L);
    cc.ladder = cfg.levels;
    if (cc.ladder.empty()) cc.ladder = {cfg.n, 2 * cfg.n, 4 * cfg.n, 8 * cfg.n};
    cc.jbar = cfg.jbar;
    cc.ratio = ratio_value(cfg.ratio);
    cc.T = cfg.T;
    cc.records = cfg.records;
    cc.dt_factor = cfg.dt_factor;
    cc.steps = cfg.steps;
    cc.ref_levels = cfg.ref_levels;
    cc.samples = cfg.samples;
    cc.seed = cfg.seed;
    cc.solver = solver_of(cfg);
    cc.quad_degree = cfg.quad_order;
    cc.signed_h = cfg.h_sign < 0 ? -1.0 : 1.0;
    if (cfg.reference == "spectral") cc.reference = ReferencePolicy::spectral;
    else if (cfg.reference == "fine") cc.reference = ReferencePolicy::fine;
    else if (cfg.reference == "auto")
      cc.reference = (d == 1 && !problem.has_noise()) ? ReferencePolicy::spectral : ReferencePolicy::fine;
    else throw InputError("--reference must be auto, spectral or fine");

    const std::string dir = make_run_dir(cfg);
    if (run_dir) *run_dir = dir;
    write_manifest(cfg, dir);
    const ConvergenceResult res = run_convergence(element, problem, cc);

    write_text_file((fs::path(dir) / "convergence_base.csv").string(), res.base.to_csv());
    if (cc.jbar > 0) write_text_file((fs::path(dir) / "convergence_mixture.csv").string(), res.mixture.to_csv());
    if (cfg.svg) {
      std::vector<ConvergenceReport> reps{res.base};
      if (cc.jbar > 0) reps.push_back(res.mixture);
      write_text_file((fs::path(dir) / "convergence.svg").string(), convergence_svg(reps));
    }

    out << "run directory: " << dir << "\n";
    out << "reference: " << (cc.reference == ReferencePolicy::spectral ? "spectral" : "fine") << " n = "
        << res.reference_n << ", steps = " << res.steps << ", dt = " << format_real(res.dt)
        << ", samples = " << res.samples_done << "/" << cc.samples << "\n";
    out << "coefficients:";
    for (Index j = 0; j < res.plan.c.size(); ++j) out << " " << format_real(res.plan.c[j]);
    out << "\n";
    if (std::isfinite(res.plan.condition)) out << "warning: extrapolation matrix condition " << format_real(res.plan.condition) << "\n";
    out << "base:\n" << res.base.to_csv();
    if (cc.jbar > 0) out << "mixture:\n" << res.mixture.to_csv();
    if (!res.complete) {
      err << "numerical failure: " << res.failure << " (partial results written)\n";
      return kExitNumerical;
    }
    return kExitOk;
  });
}

int cmd_replay(const std::string& path, const std::string& out_base, std::ostream& out, std::ostream& err,
               std::string* run_dir) {
  RunConfig cfg;
  try {
    fs::path manifest = path;
    if (fs::is_directory(manifest)) manifest /= "manifest.txt";
    cfg = parse_manifest(read_text_file(manifest.string()), manifest.parent_path().string());
  } catch (const Error& e) {
    err << "input error: " << e.what() << "\n";
    return kExitInput;
  }
  cfg.out = out_base;
  if (cfg.command == "simulate") return cmd_simulate(cfg, out, err, run_dir);
  if (cfg.command == "convergence") return cmd_convergence(cfg, out, err, run_dir);
  if (cfg.command == "verify-element") return cmd_verify_element(cfg, out, err);
  err << "input error: manifest command '" << cfg.command << "' cannot be replayed\n";
  return kExitInput;
}

}  // namespace afem
