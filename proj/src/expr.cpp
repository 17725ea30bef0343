#include "accelfem/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <numbers>

namespace afem {

namespace {

using NodePtr = std::shared_ptr<const ExprNode>;

NodePtr make(ExprOp op, NodePtr lhs = nullptr, NodePtr rhs = nullptr, double value = 0.0, int index = 0) {
  auto n = std::make_shared<ExprNode>();
  n->op = op;
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  n->value = value;
  n->index = index;
  return n;
}

class Parser {
 public:
  explicit Parser(std::string_view s) : s_(s) {}

  NodePtr parse() {
    NodePtr n = expression();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return n;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw ExprError("syntax error at offset " + std::to_string(pos_) + ": " + msg, static_cast<long>(pos_));
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr expression() {
    NodePtr n = term();
    for (;;) {
      if (accept('+')) n = make(ExprOp::add, n, term());
      else if (accept('-')) n = make(ExprOp::sub, n, term());
      else return n;
    }
  }

  NodePtr term() {
    NodePtr n = unary();
    for (;;) {
      if (accept('*')) n = make(ExprOp::mul, n, unary());
      else if (accept('/')) n = make(ExprOp::div, n, unary());
      else return n;
    }
  }

  NodePtr unary() {
    if (accept('-')) return make(ExprOp::neg, unary());
    return power();
  }

  NodePtr power() {
    NodePtr base = primary();
    if (!accept('^')) return base;
    skip();
    int sign = 1;
    if (accept('-')) sign = -1;
    else accept('+');
    skip();
    const std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail("exponent must be an integer literal");
    if (pos_ < s_.size() && (s_[pos_] == '.' || s_[pos_] == 'e' || s_[pos_] == 'E'))
      fail("exponent must be an integer literal");
    if (pos_ - start > 6) fail("exponent too large");
    const int e = std::atoi(std::string(s_.substr(start, pos_ - start)).c_str());
    return make(ExprOp::pow, base, nullptr, 0.0, sign * e);
  }

  NodePtr primary() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    const char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr n = expression();
      if (!accept(')')) fail("expected ')'");
      return n;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
    fail("unexpected '" + std::string(1, c) + "'");
  }

  NodePtr number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      const std::size_t d0 = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      return pos_ - d0;
    };
    std::size_t count = digits();
    if (pos_ < s_.size() && s_[pos_] == '.') {
      ++pos_;
      count += digits();
    }
    if (count == 0) fail("malformed number");
    if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
      const std::size_t save = pos_;
      ++pos_;
      if (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-')) ++pos_;
      if (digits() == 0) {
        pos_ = save;
        fail("malformed exponent in number");
      }
    }
    const std::string text(s_.substr(start, pos_ - start));
    return make(ExprOp::number, nullptr, nullptr, std::strtod(text.c_str(), nullptr));
  }

  NodePtr identifier() {
    const std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
    const std::string name(s_.substr(start, pos_ - start));
    if (name == "t") return make(ExprOp::variable, nullptr, nullptr, 0.0, 0);
    if (name == "pi") return make(ExprOp::number, nullptr, nullptr, std::numbers::pi);
    if (name.size() == 2 && name[0] == 'x' && name[1] >= '1' && name[1] <= '9')
      return make(ExprOp::variable, nullptr, nullptr, 0.0, name[1] - '0');

    ExprOp op;
    if (name == "sin") op = ExprOp::sin;
    else if (name == "cos") op = ExprOp::cos;
    else if (name == "exp") op = ExprOp::exp;
    else if (name == "sqrt") op = ExprOp::sqrt;
    else {
      pos_ = start;
      fail("unknown identifier '" + name + "'");
    }
    if (!accept('(')) fail("expected '(' after " + name);
    NodePtr arg = expression();
    int args = 1;
    while (accept(',')) {
      expression();
      ++args;
    }
    if (args != 1) {
      pos_ = start;
      fail(name + " takes 1 argument, got " + std::to_string(args));
    }
    if (!accept(')')) fail("expected ')'");
    return make(op, arg);
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

[[noreturn]] void eval_fail(const std::string& msg) { throw ExprError(msg, -1); }

double checked(double v) {
  if (!std::isfinite(v)) eval_fail("non-finite result");
  return v;
}

double eval(const ExprNode& n, const Point& x, double t) {
  switch (n.op) {
    case ExprOp::number:
      return n.value;
    case ExprOp::variable:
      if (n.index == 0) return t;
      if (n.index > x.size())
        eval_fail("x" + std::to_string(n.index) + " used with a " + std::to_string(x.size()) + "-dimensional point");
      return x[n.index - 1];
    case ExprOp::neg:
      return -eval(*n.lhs, x, t);
    case ExprOp::add:
      return checked(eval(*n.lhs, x, t) + eval(*n.rhs, x, t));
    case ExprOp::sub:
      return checked(eval(*n.lhs, x, t) - eval(*n.rhs, x, t));
    case ExprOp::mul:
      return checked(eval(*n.lhs, x, t) * eval(*n.rhs, x, t));
    case ExprOp::div: {
      const double num = eval(*n.lhs, x, t);
      const double den = eval(*n.rhs, x, t);
      if (den == 0.0) eval_fail("division by zero");
      return checked(num / den);
    }
    case ExprOp::pow: {
      const double b = eval(*n.lhs, x, t);
      if (b == 0.0 && n.index < 0) eval_fail("division by zero");
      return checked(std::pow(b, n.index));
    }
    case ExprOp::sin:
      return std::sin(eval(*n.lhs, x, t));
    case ExprOp::cos:
      return std::cos(eval(*n.lhs, x, t));
    case ExprOp::exp:
      return checked(std::exp(eval(*n.lhs, x, t)));
    case ExprOp::sqrt: {
      const double a = eval(*n.lhs, x, t);
      if (a < 0.0) eval_fail("sqrt of a negative number");
      return std::sqrt(a);
    }
  }
  eval_fail("corrupt expression");
}

void print(const ExprNode& n, std::string& out) {
  auto binary = [&](const char* op) {
    out += '(';
    print(*n.lhs, out);
    out += op;
    print(*n.rhs, out);
    out += ')';
  };
  auto call = [&](const char* name) {
    out += name;
    out += '(';
    print(*n.lhs, out);
    out += ')';
  };
  switch (n.op) {
    case ExprOp::number: {
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", n.value);
      if (n.value < 0) out += std::string("(") + buf + ")";
      else out += buf;
      return;
    }
    case ExprOp::variable:
      out += n.index == 0 ? std::string("t") : "x" + std::to_string(n.index);
      return;
    case ExprOp::neg:
      out += "(-";
      print(*n.lhs, out);
      out += ')';
      return;
    case ExprOp::add: return binary(" + ");
    case ExprOp::sub: return binary(" - ");
    case ExprOp::mul: return binary(" * ");
    case ExprOp::div: return binary(" / ");
    case ExprOp::pow:
      out += '(';
      print(*n.lhs, out);
      out += '^' + std::to_string(n.index) + ')';
      return;
    case ExprOp::sin: return call("sin");
    case ExprOp::cos: return call("cos");
    case ExprOp::exp: return call("exp");
    case ExprOp::sqrt: return call("sqrt");
  }
}

bool uses_time(const ExprNode* n) {
  if (!n) return false;
  if (n->op == ExprOp::variable && n->index == 0) return true;
  return uses_time(n->lhs.get()) || uses_time(n->rhs.get());
}

int max_var(const ExprNode* n) {
  if (!n) return 0;
  const int own = n->op == ExprOp::variable ? n->index : 0;
  return std::max({own, max_var(n->lhs.get()), max_var(n->rhs.get())});
}

bool same(const ExprNode* a, const ExprNode* b) {
  if (!a || !b) return a == b;
  if (a->op != b->op) return false;
  if (a->op == ExprOp::number && !(a->value == b->value || (std::isnan(a->value) && std::isnan(b->value))))
    return false;
  if ((a->op == ExprOp::variable || a->op == ExprOp::pow) && a->index != b->index) return false;
  return same(a->lhs.get(), b->lhs.get()) && same(a->rhs.get(), b->rhs.get());
}

}  // namespace

Expr Expr::parse(std::string_view source) { return Expr(Parser(source).parse()); }

Expr Expr::constant(double value) { return Expr(make(ExprOp::number, nullptr, nullptr, value)); }

double Expr::operator()(const Point& x, double t) const { return checked(eval(*root_, x, t)); }

std::string Expr::print() const {
  std::string out;
  afem::print(*root_, out);
  return out;
}

bool Expr::depends_on_time() const { return uses_time(root_.get()); }

int Expr::max_variable() const { return max_var(root_.get()); }

bool operator==(const Expr& a, const Expr& b) { return same(a.root_.get(), b.root_.get()); }

}  // namespace afem
