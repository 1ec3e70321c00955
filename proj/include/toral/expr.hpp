#pragma once

// Small expression trees for real-analytic graph functions. Evaluation works
// at real or complex arguments; jets carry value, gradient and Hessian.

#include <memory>
#include <string>
#include <vector>

#include "toral/numeric.hpp"

namespace toral {

template <class T>
struct Jet {
  T value{};
  std::vector<T> grad;  // n
  std::vector<T> hess;  // n * n, row-major

  T h(std::size_t i, std::size_t j) const { return hess[i * grad.size() + j]; }
};

class Expr {
 public:
  enum class Op { Const, Var, Add, Mul, Neg, Exp, Sin, Cos, Atan, Pow };

  Expr();  // the constant 0
  static Expr constant(double c);
  static Expr var(int index);  // 0-based

  friend Expr operator+(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a, const Expr& b);
  friend Expr operator*(const Expr& a, const Expr& b);
  friend Expr operator/(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a);
  friend Expr exp(const Expr& a);
  friend Expr sin(const Expr& a);
  friend Expr cos(const Expr& a);
  friend Expr atan(const Expr& a);
  friend Expr pow(const Expr& a, int n);

  double eval(const RealVec& x) const;
  cplx eval(const ComplexVec& z) const;
  Jet<double> jet(const RealVec& x) const;
  Jet<cplx> jet(const ComplexVec& z) const;

  // Highest variable index used plus one.
  int arity() const;
  // Re-parseable text.
  std::string str() const;

  struct Node;

 private:
  explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

// Grammar: sums/products/quotients, unary minus, '^' with an integer
// exponent, parentheses, numbers, pi, variables x1..x9, and the functions
// exp, sin, cos, atan.
Expr parse_expr(const std::string& text);

}  // namespace toral
