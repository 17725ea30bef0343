#include "accelfem/problem.hpp"

#include "accelfem/keyvalue.hpp"

#include <algorithm>
#include <optional>

namespace afem {

namespace {

bool any_time(const std::vector<Expr>& v) {
  return std::any_of(v.begin(), v.end(), [](const Expr& e) { return e.depends_on_time(); });
}

bool all_zero(const std::vector<Expr>& v) {
  return std::all_of(v.begin(), v.end(), [](const Expr& e) { return e.is_zero(); });
}

int parse_index(const std::string& s, int line) {
  if (s.empty() || s.size() > 3 || !std::all_of(s.begin(), s.end(), ::isdigit))
    throw InputError("problem file line " + std::to_string(line) + ": bad index '" + s + "'");
  return std::stoi(s);
}

}  // namespace

ProblemSpec::ProblemSpec(int dimension, int rho)
    : dim(dimension),
      rho_max(rho),
      a(dimension * dimension),
      b(dimension),
      sigma(dimension * rho),
      nu(rho),
      g(rho) {
  if (dimension < 1 || dimension > kMaxDim) throw InputError("problem dimension must be in 1..4");
  if (rho < 0) throw InputError("rho_max must be non-negative");
}

bool ProblemSpec::has_noise() const { return !(all_zero(sigma) && all_zero(nu) && all_zero(g)); }

bool ProblemSpec::drift_depends_on_time() const {
  return any_time(a) || any_time(b) || c.depends_on_time();
}

bool ProblemSpec::noise_depends_on_time() const { return any_time(sigma) || any_time(nu); }

ProblemSpec parse_problem(std::string_view text, int dimension, int rho_max) {
  ProblemSpec p(dimension, rho_max);
  std::vector<std::optional<Expr>> a_given(dimension * dimension);
  std::vector<std::string> seen;

  for (const auto& kv : parse_key_values(text)) {
    const std::string where = "problem file line " + std::to_string(kv.line) + ": ";
    if (std::find(seen.begin(), seen.end(), kv.key) != seen.end())
      throw InputError(where + "duplicate key '" + kv.key + "'");
    seen.push_back(kv.key);

    Expr e;
    try {
      e = Expr::parse(kv.value);
    } catch (const ExprError& err) {
      throw InputError(where + kv.key + ": " + err.what());
    }
    if (e.max_variable() > dimension)
      throw InputError(where + kv.key + " uses x" + std::to_string(e.max_variable()) + " in a " +
                       std::to_string(dimension) + "-dimensional problem");

    const auto parts = split(kv.key, '.');
    const std::string& name = parts[0];
    std::vector<int> idx;
    for (std::size_t k = 1; k < parts.size(); ++k) idx.push_back(parse_index(parts[k], kv.line));
    auto need = [&](std::size_t count) {
      if (idx.size() != count)
        throw InputError(where + "'" + name + "' takes " + std::to_string(count) + " index(es)");
    };
    auto in_space = [&](int i) {
      if (i < 1 || i > dimension) throw InputError(where + "space index " + std::to_string(i) + " out of range");
    };
    auto keep_rho = [&](int r) {
      if (r < 1) throw InputError(where + "noise index must be >= 1");
      if (r > rho_max) {
        p.truncated.push_back(kv.key);
        return false;
      }
      return true;
    };

    if (name == "a") {
      need(2);
      in_space(idx[0]);
      in_space(idx[1]);
      a_given[(idx[0] - 1) * dimension + idx[1] - 1] = e;
    } else if (name == "b") {
      need(1);
      in_space(idx[0]);
      p.b[idx[0] - 1] = e;
    } else if (name == "c") {
      need(0);
      p.c = e;
    } else if (name == "f") {
      need(0);
      p.f = e;
    } else if (name == "phi") {
      need(0);
      p.phi = e;
    } else if (name == "sigma") {
      need(2);
      in_space(idx[0]);
      if (keep_rho(idx[1])) p.sigma[(idx[0] - 1) * rho_max + idx[1] - 1] = e;
    } else if (name == "nu") {
      need(1);
      if (keep_rho(idx[0])) p.nu[idx[0] - 1] = e;
    } else if (name == "g") {
      need(1);
      if (keep_rho(idx[0])) p.g[idx[0] - 1] = e;
    } else {
      throw InputError(where + "unknown key '" + kv.key + "'");
    }
  }

  for (int i = 0; i < dimension; ++i) {
    if (!a_given[i * dimension + i])
      throw InputError("problem file: a." + std::to_string(i + 1) + "." + std::to_string(i + 1) + " is required");
    for (int j = 0; j < dimension; ++j) {
      const auto& ij = a_given[i * dimension + j];
      const auto& ji = a_given[j * dimension + i];
      if (ij && ji && ij->print() != ji->print())
        throw InputError("problem file: a." + std::to_string(i + 1) + "." + std::to_string(j + 1) + " and a." +
                         std::to_string(j + 1) + "." + std::to_string(i + 1) + " differ; a must be symmetric");
      if (ij) p.a[i * dimension + j] = *ij;
      else if (ji) p.a[i * dimension + j] = *ji;
    }
  }
  return p;
}

ProblemSpec load_problem_file(const std::string& path, int dimension, int rho_max) {
  return parse_problem(read_text_file(path), dimension, rho_max);
}

std::string format_problem(const ProblemSpec& p) {
  std::string out;
  auto line = [&](const std::string& key, const Expr& e, bool always = false) {
    if (always || !e.is_zero()) out += key + " = " + quote_value(e.print()) + "\n";
  };
  for (int i = 0; i < p.dim; ++i)
    for (int j = i; j < p.dim; ++j) line("a." + std::to_string(i + 1) + "." + std::to_string(j + 1), p.a_ij(i, j), i == j);
  for (int i = 0; i < p.dim; ++i) line("b." + std::to_string(i + 1), p.b[i]);
  line("c", p.c);
  line("f", p.f);
  for (int i = 0; i < p.dim; ++i)
    for (int r = 0; r < p.rho_max; ++r)
      line("sigma." + std::to_string(i + 1) + "." + std::to_string(r + 1), p.sigma_ir(i, r));
  for (int r = 0; r < p.rho_max; ++r) line("nu." + std::to_string(r + 1), p.nu[r]);
  for (int r = 0; r < p.rho_max; ++r) line("g." + std::to_string(r + 1), p.g[r]);
  line("phi", p.phi);
  return out;
}

}  // namespace afem
