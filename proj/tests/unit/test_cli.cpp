#include "accelfem/app.hpp"
#include "accelfem/assembly.hpp"
#include "accelfem/keyvalue.hpp"

#include <doctest.h>

#include <Eigen/LU>
#include <filesystem>
#include <numbers>
#include <random>
#include <sstream>

using namespace afem;
namespace fs = std::filesystem;

namespace {

const std::string kData = ACCELFEM_TEST_DATA;

struct TempDir {
  fs::path path;
  TempDir() {
    std::random_device rd;
    path = fs::temp_directory_path() / ("accelfem-test-" + std::to_string(rd()));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
};

RunConfig simulate_config(const std::string& problem, const fs::path& out) {
  RunConfig c;
  c.command = "simulate";
  c.problem_file = kData + "/" + problem;
  c.n = 16;
  c.T = 0.1;
  c.steps = 10;
  c.out = out.string();
  return c;
}

Eigen::VectorXd csv_values(const std::string& csv) {
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  std::vector<double> v;
  while (std::getline(in, line)) v.push_back(std::stod(line.substr(line.rfind(',') + 1)));
  return Eigen::Map<Eigen::VectorXd>(v.data(), static_cast<Index>(v.size()));
}

}  // namespace

TEST_CASE("verify-element exit codes") {
  std::ostringstream out, err;
  RunConfig c;
  c.command = "verify-element";
  for (const char* preset : {"hat1d", "triangle2d", "tensor(3)"}) {
    c.preset = preset;
    CHECK(cmd_verify_element(c, out, err) == kExitOk);
  }
  c.preset = "hat1d";
  out.str("");
  cmd_verify_element(c, out, err);
  CHECK(out.str().find("3.3333333333333") != std::string::npos);

  c.element_file = kData + "/hat1d_scaled.txt";
  out.str("");
  CHECK(cmd_verify_element(c, out, err) == kExitFail);
  CHECK(out.str().find("FAIL") != std::string::npos);

  c.element_file = kData + "/malformed_element.txt";
  err.str("");
  CHECK(cmd_verify_element(c, out, err) == kExitInput);
  CHECK(err.str().find("line 5") != std::string::npos);

  c.element_file = kData + "/does_not_exist.txt";
  CHECK(cmd_verify_element(c, out, err) == kExitInput);
  c.element_file.clear();
  c.preset = "pentagon";
  CHECK(cmd_verify_element(c, out, err) == kExitInput);
}

TEST_CASE("simulate writes the trajectory and replays byte-identically") {
  TempDir tmp;
  std::ostringstream out, err;

  std::string dir;
  REQUIRE(cmd_simulate(simulate_config("zero.txt", tmp.path), out, err, &dir) == kExitOk);
  CHECK(csv_values(read_text_file(dir + "/terminal.csv")).isZero(0.0));

  RunConfig heat = simulate_config("heat.txt", tmp.path);
  heat.record = "all";
  REQUIRE(cmd_simulate(heat, out, err, &dir) == kExitOk);
  const std::string terminal = read_text_file(dir + "/terminal.csv");
  const std::string trajectory = read_text_file(dir + "/trajectory.csv");
  CHECK(trajectory.rfind("t,i1,x1,value\n", 0) == 0);
  CHECK(terminal.find('\r') == std::string::npos);

  // dense oracle: (M - dt K) U' = M U, M U_0 = phi^h
  const auto element = build_hat1d();
  const ElementRules rules(element);
  const auto tensors = compute_reference_tensors(rules);
  const TorusLattice lat(1, 2 * std::numbers::pi / 16, 16);
  const auto problem = load_problem_file(heat.problem_file, 1, 1);
  AssembledProblem ap(rules, tensors, problem, lat, lat.h());
  const Eigen::MatrixXd m = ap.mass().to_dense();
  const Eigen::MatrixXd k = ap.drift(0.0).to_dense();
  const double dt = 0.01;
  Eigen::VectorXd u = m.partialPivLu().solve(ap.initial_data().values);
  const Eigen::PartialPivLU<Eigen::MatrixXd> lu(m - dt * k);
  for (int s = 0; s < 10; ++s) u = lu.solve(m * u);
  CHECK((csv_values(terminal) - u).cwiseAbs().maxCoeff() < 1e-8);

  std::string replay_dir;
  REQUIRE(cmd_replay(dir, tmp.path.string(), out, err, &replay_dir) == kExitOk);
  CHECK(replay_dir != dir);
  CHECK(read_text_file(replay_dir + "/terminal.csv") == terminal);
  CHECK(read_text_file(replay_dir + "/trajectory.csv") == trajectory);
  CHECK(read_text_file(replay_dir + "/manifest.txt") == read_text_file(dir + "/manifest.txt"));
}

TEST_CASE("stochastic simulate replays byte-identically") {
  TempDir tmp;
  std::ostringstream out, err;
  RunConfig c = simulate_config("stochastic.txt", tmp.path);
  c.seed = 12345;
  std::string dir, again;
  REQUIRE(cmd_simulate(c, out, err, &dir) == kExitOk);
  REQUIRE(cmd_replay(dir + "/manifest.txt", tmp.path.string(), out, err, &again) == kExitOk);
  CHECK(read_text_file(dir + "/terminal.csv") == read_text_file(again + "/terminal.csv"));
  c.seed = 12346;
  std::string other;
  REQUIRE(cmd_simulate(c, out, err, &other) == kExitOk);
  CHECK(read_text_file(dir + "/terminal.csv") != read_text_file(other + "/terminal.csv"));
}

TEST_CASE("manifest round trip") {
  RunConfig c;
  c.command = "convergence";
  c.preset = "tensor(2)";
  c.L = "2*pi";
  c.levels = {8, 16, 32};
  c.seed = 18446744073709551615ull;
  c.ratio = "sixteenth";
  c.h_sign = -1;
  c.svg = true;
  const RunConfig back = parse_manifest(format_manifest(c), "/x");
  CHECK(format_manifest(back) == format_manifest(c));
  CHECK(back.seed == c.seed);
  CHECK(back.levels == c.levels);
  CHECK_THROWS_AS(parse_manifest("command = \"simulate\"\nbogus = \"1\"\n", "."), InputError);
  CHECK(parse_length("2*pi") == doctest::Approx(2 * std::numbers::pi));
  CHECK_THROWS_AS(parse_length("-1"), InputError);
}

TEST_CASE("convergence command outputs") {
  TempDir tmp;
  std::ostringstream out, err;
  RunConfig c;
  c.command = "convergence";
  c.problem_file = kData + "/deterministic.txt";
  c.levels = {8, 16, 32};
  c.ref_levels = 1;
  c.T = 0.1;
  c.steps = 20;
  c.svg = true;
  c.out = tmp.path.string();
  std::string dir;
  REQUIRE(cmd_convergence(c, out, err, &dir) == kExitOk);
  CHECK(fs::exists(dir + "/convergence_base.csv"));
  CHECK(fs::exists(dir + "/convergence_mixture.csv"));
  CHECK(fs::exists(dir + "/convergence.svg"));
  CHECK(read_text_file(dir + "/convergence_base.csv").rfind("h,n,error,order_local\n", 0) == 0);

  c.jbar = 0;
  c.svg = false;
  REQUIRE(cmd_convergence(c, out, err, &dir) == kExitOk);
  CHECK_FALSE(fs::exists(dir + "/convergence_mixture.csv"));

  c.levels = {8, 16};
  CHECK(cmd_convergence(c, out, err, &dir) == kExitInput);
}

TEST_CASE("output base honours the environment") {
  RunConfig c;
  c.out = "explicit";
  CHECK(output_base(c) == "explicit");
}
