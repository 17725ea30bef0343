#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace afem {

enum ExitCode { kExitOk = 0, kExitInput = 1, kExitFail = 2, kExitNumerical = 3 };

/// Everything a command needs; serialised as the run manifest.
struct RunConfig {
  std::string command;
  std::string preset = "hat1d";
  std::string element_file;
  std::string problem_file;
  std::string L = "2*pi";  ///< expression, e.g. "2*pi"
  int n = 32;
  double T = 0.5;
  int steps = 0;           ///< 0: derive from dt_factor
  std::uint64_t seed = 1;
  int samples = 1;
  int rho_max = 1;
  int jbar = 1;
  std::string ratio = "quarter";
  double tol = 1e-10;
  int max_iter = 2000;
  int quad_order = 8;
  std::string out;
  std::vector<int> levels;  ///< convergence ladder; empty: n, 2n, 4n, 8n
  double dt_factor = 0.5;
  std::string reference = "auto";
  int ref_levels = 2;
  int records = 10;
  std::string record = "terminal";
  int h_sign = 1;
  bool svg = false;
};

/// Manifest text: `key = value` lines, no timestamps or output paths.
/// Element and problem files are referenced by their copies in the run directory.
std::string format_manifest(const RunConfig& cfg);
RunConfig parse_manifest(const std::string& text, const std::string& manifest_dir);

double parse_length(const std::string& expr);

/// Each command returns an ExitCode; errors are reported on `err`.
int cmd_verify_element(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_simulate(const RunConfig& cfg, std::ostream& out, std::ostream& err, std::string* run_dir = nullptr);
int cmd_convergence(const RunConfig& cfg, std::ostream& out, std::ostream& err, std::string* run_dir = nullptr);
/// Re-runs the manifest at `path` (a run directory or manifest file) into a fresh run directory.
int cmd_replay(const std::string& path, const std::string& out_base, std::ostream& out, std::ostream& err,
               std::string* run_dir = nullptr);

/// Base output directory: cfg.out, else $ACCELFEM_OUT, else "runs".
std::string output_base(const RunConfig& cfg);

}  // namespace afem
