#include "toral/expr.hpp"

#include <cctype>
#include <cmath>
#include <complex>
#include <iomanip>
#include <sstream>

#include "toral/errors.hpp"

namespace toral {

struct Expr::Node {
  Op op = Op::Const;
  double c = 0.0;
  int index = 0;  // variable index or integer exponent
  std::shared_ptr<const Node> a, b;
};

namespace {

using NodePtr = std::shared_ptr<const Expr::Node>;

NodePtr make(Expr::Op op, NodePtr a = nullptr, NodePtr b = nullptr, double c = 0.0, int index = 0) {
  auto n = std::make_shared<Expr::Node>();
  n->op = op;
  n->a = std::move(a);
  n->b = std::move(b);
  n->c = c;
  n->index = index;
  return n;
}

template <class T>
T ipow(T base, int n) {
  if (n < 0) return T(1) / ipow(base, -n);
  T r(1);
  while (n) {
    if (n & 1) r *= base;
    base *= base;
    n >>= 1;
  }
  return r;
}

template <class T>
T value_of(const Expr::Node& n, const std::vector<T>& x) {
  using Op = Expr::Op;
  switch (n.op) {
    case Op::Const: return T(n.c);
    case Op::Var: return x.at(n.index);
    case Op::Add: return value_of(*n.a, x) + value_of(*n.b, x);
    case Op::Mul: return value_of(*n.a, x) * value_of(*n.b, x);
    case Op::Neg: return -value_of(*n.a, x);
    case Op::Exp: return std::exp(value_of(*n.a, x));
    case Op::Sin: return std::sin(value_of(*n.a, x));
    case Op::Cos: return std::cos(value_of(*n.a, x));
    case Op::Atan: return std::atan(value_of(*n.a, x));
    case Op::Pow: return ipow(value_of(*n.a, x), n.index);
  }
  return T(0);
}

// g = phi(u): grad g = phi' grad u, hess g = phi' hess u + phi'' grad u grad u^T.
template <class T>
Jet<T> chain(const Jet<T>& u, T v, T d1, T d2) {
  const std::size_t n = u.grad.size();
  Jet<T> r{v, std::vector<T>(n), std::vector<T>(n * n)};
  for (std::size_t i = 0; i < n; ++i) r.grad[i] = d1 * u.grad[i];
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      r.hess[i * n + j] = d1 * u.hess[i * n + j] + d2 * u.grad[i] * u.grad[j];
  return r;
}

template <class T>
Jet<T> jet_of(const Expr::Node& node, const std::vector<T>& x) {
  using Op = Expr::Op;
  const std::size_t n = x.size();
  switch (node.op) {
    case Op::Const: return Jet<T>{T(node.c), std::vector<T>(n), std::vector<T>(n * n)};
    case Op::Var: {
      Jet<T> r{x.at(node.index), std::vector<T>(n), std::vector<T>(n * n)};
      r.grad[node.index] = T(1);
      return r;
    }
    case Op::Add: {
      Jet<T> a = jet_of(*node.a, x);
      const Jet<T> b = jet_of(*node.b, x);
      a.value += b.value;
      for (std::size_t i = 0; i < n; ++i) a.grad[i] += b.grad[i];
      for (std::size_t i = 0; i < n * n; ++i) a.hess[i] += b.hess[i];
      return a;
    }
    case Op::Mul: {
      const Jet<T> a = jet_of(*node.a, x);
      const Jet<T> b = jet_of(*node.b, x);
      Jet<T> r{a.value * b.value, std::vector<T>(n), std::vector<T>(n * n)};
      for (std::size_t i = 0; i < n; ++i) r.grad[i] = a.value * b.grad[i] + b.value * a.grad[i];
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          r.hess[i * n + j] = a.value * b.hess[i * n + j] + b.value * a.hess[i * n + j] +
                              a.grad[i] * b.grad[j] + b.grad[i] * a.grad[j];
      return r;
    }
    case Op::Neg: {
      Jet<T> a = jet_of(*node.a, x);
      a.value = -a.value;
      for (auto& g : a.grad) g = -g;
      for (auto& h : a.hess) h = -h;
      return a;
    }
    case Op::Exp: {
      const Jet<T> u = jet_of(*node.a, x);
      const T e = std::exp(u.value);
      return chain(u, e, e, e);
    }
    case Op::Sin: {
      const Jet<T> u = jet_of(*node.a, x);
      const T s = std::sin(u.value), c = std::cos(u.value);
      return chain(u, s, c, -s);
    }
    case Op::Cos: {
      const Jet<T> u = jet_of(*node.a, x);
      const T s = std::sin(u.value), c = std::cos(u.value);
      return chain(u, c, -s, -c);
    }
    case Op::Atan: {
      const Jet<T> u = jet_of(*node.a, x);
      const T q = T(1) / (T(1) + u.value * u.value);
      return chain(u, std::atan(u.value), q, T(-2) * u.value * q * q);
    }
    case Op::Pow: {
      const Jet<T> u = jet_of(*node.a, x);
      const int k = node.index;
      if (k == 0) return Jet<T>{T(1), std::vector<T>(n), std::vector<T>(n * n)};
      const T v = ipow(u.value, k);
      const T d1 = T(k) * ipow(u.value, k - 1);
      const T d2 = k == 1 ? T(0) : T(k) * T(k - 1) * ipow(u.value, k - 2);
      return chain(u, v, d1, d2);
    }
  }
  return Jet<T>{};
}

int arity_of(const Expr::Node& n) {
  int r = n.op == Expr::Op::Var ? n.index + 1 : 0;
  if (n.a) r = std::max(r, arity_of(*n.a));
  if (n.b) r = std::max(r, arity_of(*n.b));
  return r;
}

std::string str_of(const Expr::Node& n) {
  using Op = Expr::Op;
  std::ostringstream os;
  os << std::setprecision(17);
  switch (n.op) {
    case Op::Const:
      if (n.c < 0) os << "(" << n.c << ")";
      else os << n.c;
      break;
    case Op::Var: os << "x" << n.index + 1; break;
    case Op::Add: os << "(" << str_of(*n.a) << " + " << str_of(*n.b) << ")"; break;
    case Op::Mul: os << str_of(*n.a) << "*" << str_of(*n.b); break;
    case Op::Neg: os << "(-" << str_of(*n.a) << ")"; break;
    case Op::Exp: os << "exp(" << str_of(*n.a) << ")"; break;
    case Op::Sin: os << "sin(" << str_of(*n.a) << ")"; break;
    case Op::Cos: os << "cos(" << str_of(*n.a) << ")"; break;
    case Op::Atan: os << "atan(" << str_of(*n.a) << ")"; break;
    case Op::Pow: os << "(" << str_of(*n.a) << ")^(" << n.index << ")"; break;
  }
  return os.str();
}

class Parser {
 public:
  explicit Parser(const std::string& s) : s_(s) {}

  Expr parse() {
    Expr e = sum();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& why) const {
    throw ValidationError("parse_expr: " + why + " at offset " + std::to_string(pos_) + " in '" +
                          s_ + "'");
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Expr sum() {
    Expr e = product();
    while (true) {
      if (eat('+')) e = e + product();
      else if (eat('-')) e = e - product();
      else return e;
    }
  }

  Expr product() {
    Expr e = unary();
    while (true) {
      if (eat('*')) e = e * unary();
      else if (eat('/')) e = e / unary();
      else return e;
    }
  }

  Expr unary() {
    if (eat('-')) return -unary();
    if (eat('+')) return unary();
    return power();
  }

  Expr power() {
    Expr base = primary();
    if (!eat('^')) return base;
    bool paren = eat('(');
    bool neg = eat('-');
    skip();
    const std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail("expected integer exponent");
    int k = std::stoi(s_.substr(start, pos_ - start));
    if (paren && !eat(')')) fail("expected ')'");
    return pow(base, neg ? -k : k);
  }

  Expr primary() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end");
    const char c = s_[pos_];
    if (eat('(')) {
      Expr e = sum();
      if (!eat(')')) fail("expected ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::size_t used = 0;
      const double v = std::stod(s_.substr(pos_), &used);
      pos_ += used;
      return Expr::constant(v);
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      const std::string name = s_.substr(start, pos_ - start);
      if (name == "pi") return Expr::constant(std::numbers::pi);
      if (name.size() == 2 && name[0] == 'x' && name[1] >= '1' && name[1] <= '9') {
        return Expr::var(name[1] - '1');
      }
      if (!eat('(')) fail("unknown symbol '" + name + "'");
      Expr arg = sum();
      if (!eat(')')) fail("expected ')'");
      if (name == "exp") return exp(arg);
      if (name == "sin") return sin(arg);
      if (name == "cos") return cos(arg);
      if (name == "atan") return atan(arg);
      fail("unknown function '" + name + "'");
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  const std::string& s_;
  std::size_t pos_ = 0;
};

}  // namespace

Expr::Expr() : node_(make(Op::Const)) {}
Expr Expr::constant(double c) { return Expr(make(Op::Const, nullptr, nullptr, c)); }
Expr Expr::var(int index) {
  if (index < 0) throw ValidationError("Expr::var: negative index");
  return Expr(make(Op::Var, nullptr, nullptr, 0.0, index));
}

Expr operator+(const Expr& a, const Expr& b) { return Expr(make(Expr::Op::Add, a.node_, b.node_)); }
Expr operator-(const Expr& a, const Expr& b) { return a + (-b); }
Expr operator*(const Expr& a, const Expr& b) { return Expr(make(Expr::Op::Mul, a.node_, b.node_)); }
Expr operator/(const Expr& a, const Expr& b) { return a * pow(b, -1); }
Expr operator-(const Expr& a) { return Expr(make(Expr::Op::Neg, a.node_)); }
Expr exp(const Expr& a) { return Expr(make(Expr::Op::Exp, a.node_)); }
Expr sin(const Expr& a) { return Expr(make(Expr::Op::Sin, a.node_)); }
Expr cos(const Expr& a) { return Expr(make(Expr::Op::Cos, a.node_)); }
Expr atan(const Expr& a) { return Expr(make(Expr::Op::Atan, a.node_)); }
Expr pow(const Expr& a, int n) {
  return Expr(make(Expr::Op::Pow, a.node_, nullptr, 0.0, n));
}

double Expr::eval(const RealVec& x) const { return value_of(*node_, x); }
cplx Expr::eval(const ComplexVec& z) const { return value_of(*node_, z); }
Jet<double> Expr::jet(const RealVec& x) const { return jet_of(*node_, x); }
Jet<cplx> Expr::jet(const ComplexVec& z) const { return jet_of(*node_, z); }
int Expr::arity() const { return arity_of(*node_); }
std::string Expr::str() const { return str_of(*node_); }

Expr parse_expr(const std::string& text) { return Parser(text).parse(); }

}  // namespace toral
