#include "accelfem/element.hpp"
#include "accelfem/keyvalue.hpp"

namespace afem {

namespace {

std::string at_line(int line) { return "element file line " + std::to_string(line) + ": "; }

double real_at(const std::string& s, int line) {
  try {
    return parse_real(s);
  } catch (const InputError& e) {
    throw InputError(at_line(line) + e.what() + " in '" + trim(s) + "'");
  }
}

Point parse_point(const std::string& s, int dim, int line) {
  const auto parts = split(s, ',');
  if (static_cast<int>(parts.size()) != dim)
    throw InputError(at_line(line) + "expected " + std::to_string(dim) + " coordinates in '" + s + "'");
  Point p(dim);
  for (int i = 0; i < dim; ++i) p[i] = real_at(parts[i], line);
  return p;
}

IntVec parse_ints(const std::string& s, int dim, int line) {
  const Point p = parse_point(s, dim, line);
  IntVec v(dim);
  for (int i = 0; i < dim; ++i) {
    v[i] = static_cast<int>(p[i]);
    if (v[i] != p[i]) throw InputError(at_line(line) + "expected integers in '" + s + "'");
  }
  return v;
}

Cell parse_cell(const std::string& value, int dim, int line) {
  const auto space = value.find(' ');
  const std::string kind = value.substr(0, space);
  const auto verts = split(space == std::string::npos ? "" : value.substr(space + 1), ';');
  if (kind == "box") {
    if (verts.size() != 2) throw InputError(at_line(line) + "box needs 'lo; hi'");
    return Box{parse_point(verts[0], dim, line), parse_point(verts[1], dim, line)};
  }
  if (kind == "simplex") {
    if (static_cast<int>(verts.size()) != dim + 1)
      throw InputError(at_line(line) + "simplex needs " + std::to_string(dim + 1) + " vertices");
    if (dim == 1) {
      Point a = parse_point(verts[0], 1, line), b = parse_point(verts[1], 1, line);
      return Box{a.cwiseMin(b), a.cwiseMax(b)};
    }
    if (dim != 2) throw InputError(at_line(line) + "simplex cells are supported for dimension <= 2");
    Triangle t;
    for (int k = 0; k < 3; ++k) {
      const Point p = parse_point(verts[k], 2, line);
      t.v[k] = Eigen::Vector2d(p[0], p[1]);
    }
    return t;
  }
  throw InputError(at_line(line) + "unknown cell kind '" + kind + "'");
}

Polynomial parse_poly(const std::string& value, int dim, int line) {
  Polynomial p(dim, 0);
  for (const auto& term : split(value, ';')) {
    if (term.empty()) continue;
    const auto arrow = term.find("->");
    if (arrow == std::string::npos) throw InputError(at_line(line) + "term '" + term + "' needs 'exponents -> coefficient'");
    const IntVec e = parse_ints(trim(term.substr(0, arrow)), dim, line);
    if (e.minCoeff() < 0) throw InputError(at_line(line) + "negative exponent");
    p.add_term(real_at(term.substr(arrow + 2), line), e);
  }
  return p;
}

std::string join_point(const Point& p) {
  std::string s;
  for (Index i = 0; i < p.size(); ++i) s += (i ? "," : "") + format_real(p[i]);
  return s;
}

}  // namespace

FiniteElement parse_element(std::string_view text) {
  std::string name = "custom";
  int dim = 0;
  std::vector<IntVec> lambda;
  std::vector<std::pair<Cell, Polynomial>> pieces;
  bool pending_cell = false;
  int pending_line = 0;

  for (const auto& kv : parse_key_values(text)) {
    if (kv.key == "name") {
      name = kv.value;
    } else if (kv.key == "dimension") {
      const double v = real_at(kv.value, kv.line);
      if (v != static_cast<int>(v) || v < 1 || v > kMaxDim)
        throw InputError(at_line(kv.line) + "dimension must be an integer in 1..4");
      dim = static_cast<int>(v);
    } else if (dim == 0) {
      throw InputError(at_line(kv.line) + "'dimension' must come first");
    } else if (kv.key == "lambda") {
      for (const auto& s : split(kv.value, ';')) lambda.push_back(parse_ints(s, dim, kv.line));
    } else if (kv.key == "cell") {
      if (pending_cell) throw InputError(at_line(kv.line) + "previous cell has no 'poly'");
      pieces.emplace_back(parse_cell(kv.value, dim, kv.line), Polynomial(dim, 0));
      pending_cell = true;
      pending_line = kv.line;
    } else if (kv.key == "poly") {
      if (!pending_cell) throw InputError(at_line(kv.line) + "'poly' without a preceding 'cell'");
      pieces.back().second = parse_poly(kv.value, dim, kv.line);
      pending_cell = false;
    } else {
      throw InputError(at_line(kv.line) + "unknown key '" + kv.key + "'");
    }
  }
  if (dim == 0) throw InputError("element file: missing 'dimension'");
  if (pending_cell) throw InputError(at_line(pending_line) + "cell has no 'poly'");
  if (lambda.empty()) throw InputError("element file: missing 'lambda'");
  return FiniteElement(name, PiecewisePolynomial(dim, std::move(pieces)), std::move(lambda));
}

FiniteElement load_element_file(const std::string& path) { return parse_element(read_text_file(path)); }

std::string format_element(const FiniteElement& element) {
  const int d = element.dimension();
  std::string out = "name = " + element.name() + "\ndimension = " + std::to_string(d) + "\nlambda = ";
  for (std::size_t i = 0; i < element.lambda_set().size(); ++i) {
    const IntVec& l = element.lambda_set()[i];
    if (i) out += "; ";
    for (int k = 0; k < d; ++k) out += (k ? "," : "") + std::to_string(l[k]);
  }
  out += "\n";
  for (const auto& piece : element.psi().pieces()) {
    if (const auto* t = std::get_if<Triangle>(&piece.cell)) {
      out += "cell = simplex";
      for (int k = 0; k < 3; ++k) {
        out += (k ? "; " : " ") + format_real(t->v[k].x()) + "," + format_real(t->v[k].y());
      }
    } else {
      const Box& b = std::get<Box>(piece.cell);
      out += "cell = box " + join_point(b.lo) + "; " + join_point(b.hi);
    }
    out += "\npoly = ";
    bool first = true;
    for (const auto& [e, c] : piece.value.terms()) {
      if (!first) out += "; ";
      first = false;
      for (int k = 0; k < d; ++k) out += (k ? "," : "") + std::to_string(e[k]);
      out += " -> " + format_real(c);
    }
    out += "\n";
  }
  return out;
}

}  // namespace afem
