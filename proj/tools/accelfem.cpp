#include "accelfem/app.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

void add_element_flags(CLI::App* cmd, afem::RunConfig& cfg) {
  cmd->add_option("--preset", cfg.preset, "hat1d, triangle2d or tensor(d)");
  cmd->add_option("--element-file", cfg.element_file, "element description file");
  cmd->add_option("--quad-order", cfg.quad_order, "Gauss exactness degree per sub-cell");
}

void add_run_flags(CLI::App* cmd, afem::RunConfig& cfg) {
  add_element_flags(cmd, cfg);
  cmd->add_option("--problem", cfg.problem_file, "problem file")->required();
  cmd->add_option("--L", cfg.L, "torus side length (constant expression, e.g. 2*pi)");
  cmd->add_option("--n", cfg.n, "sites per axis (coarsest ladder mesh for convergence)");
  cmd->add_option("--T", cfg.T, "final time");
  cmd->add_option("--steps", cfg.steps, "time steps (0: dt = dt-factor * h^2)");
  cmd->add_option("--dt-factor", cfg.dt_factor, "C in dt = C h^2");
  cmd->add_option("--seed", cfg.seed, "noise seed");
  cmd->add_option("--rho-max", cfg.rho_max, "number of Wiener processes kept");
  cmd->add_option("--tol", cfg.tol, "linear solver relative tolerance");
  cmd->add_option("--max-iter", cfg.max_iter, "Krylov iteration limit");
  cmd->add_option("--out", cfg.out, "output base directory (default $ACCELFEM_OUT or ./runs)");
  cmd->add_option("--h-sign", cfg.h_sign, "sign of h used in assembly (+1 or -1)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite-element lattice solver for linear parabolic SPDEs with Richardson extrapolation"};
  app.require_subcommand(1);
  afem::RunConfig cfg;
  std::string replay_path;

  auto* verify = app.add_subcommand("verify-element", "check the element assumptions and print the report");
  add_element_flags(verify, cfg);

  auto* simulate = app.add_subcommand("simulate", "integrate one problem and write the trajectory");
  add_run_flags(simulate, cfg);
  simulate->add_option("--record", cfg.record, "terminal, all or every:K");

  auto* convergence = app.add_subcommand("convergence", "measure base and extrapolated convergence orders");
  add_run_flags(convergence, cfg);
  convergence->add_option("--samples", cfg.samples, "Monte Carlo samples");
  convergence->add_option("--jbar", cfg.jbar, "extrapolation levels beyond the base mesh");
  convergence->add_option("--ratio", cfg.ratio, "per-halving error ratio")->check(CLI::IsMember({"quarter", "sixteenth"}));
  convergence->add_option("--levels", cfg.levels, "explicit mesh ladder, e.g. 16,32,64,128")->delimiter(',');
  convergence->add_option("--reference", cfg.reference, "auto, spectral or fine")
      ->check(CLI::IsMember({"auto", "spectral", "fine"}));
  convergence->add_option("--ref-levels", cfg.ref_levels, "halvings from the finest ladder mesh to the reference");
  convergence->add_option("--records", cfg.records, "recorded times besides t = 0");
  convergence->add_flag("--svg", cfg.svg, "also write a log-log plot");

  auto* replay = app.add_subcommand("replay", "re-run a manifest into a new run directory");
  replay->add_option("manifest", replay_path, "run directory or manifest file")->required();
  replay->add_option("--out", cfg.out, "output base directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return afem::kExitInput;
  }

  if (verify->parsed()) {
    cfg.command = "verify-element";
    return afem::cmd_verify_element(cfg, std::cout, std::cerr);
  }
  if (simulate->parsed()) {
    cfg.command = "simulate";
    return afem::cmd_simulate(cfg, std::cout, std::cerr);
  }
  if (convergence->parsed()) {
    cfg.command = "convergence";
    return afem::cmd_convergence(cfg, std::cout, std::cerr);
  }
  return afem::cmd_replay(replay_path, afem::output_base(cfg), std::cout, std::cerr);
}
