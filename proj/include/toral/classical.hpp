#pragma once

// Legendre polynomials in exact arithmetic, zonal nodal parallels, the
// Laurent-polynomial form of planar eigenfunctions, abc arithmetic, and a
// closed-geodesic recognizer for sampled segments on T^2.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "toral/eigenfun.hpp"
#include "toral/numeric.hpp"

namespace toral {

class RationalPoly {
 public:
  RationalPoly() = default;
  explicit RationalPoly(std::vector<Rational> ascending);
  static RationalPoly monomial(int degree, const Rational& c = 1);

  int degree() const { return static_cast<int>(c_.size()) - 1; }  // -1 for zero
  bool is_zero() const { return c_.empty(); }
  const std::vector<Rational>& coeffs() const { return c_; }
  Rational coeff(int k) const;
  Rational leading() const;

  Rational operator()(const Rational& x) const;
  double eval(double x) const;

  RationalPoly monic() const;
  RationalPoly derivative() const;
  RationalPoly antiderivative() const;  // constant term 0
  Rational integrate(const Rational& a, const Rational& b) const;
  RationalPoly reflected() const;       // p(-x)

  friend RationalPoly operator+(const RationalPoly& a, const RationalPoly& b);
  friend RationalPoly operator-(const RationalPoly& a, const RationalPoly& b);
  friend RationalPoly operator*(const RationalPoly& a, const RationalPoly& b);
  friend RationalPoly operator*(const Rational& s, const RationalPoly& a);
  friend bool operator==(const RationalPoly& a, const RationalPoly& b) { return a.c_ == b.c_; }

  std::string str() const;

 private:
  void trim();
  std::vector<Rational> c_;
};

// Quotient and remainder; throws ValidationError on division by zero.
std::pair<RationalPoly, RationalPoly> divmod(const RationalPoly& a, const RationalPoly& b);
// Monic gcd (zero only if both are zero).
RationalPoly gcd(RationalPoly a, RationalPoly b);

// Closed formula 2^{-n} sum_k (-1)^k C(n,k) C(2n-2k,n) x^{n-2k}.
RationalPoly legendre(int n);

RationalPoly common_roots(int m, int n);

// Roots of P_n in (-1, 1), ascending, bracketed exactly and refined by
// bisection in 256-bit binary floating point.
std::vector<double> legendre_roots(int n);
// arccos of the roots, ascending.
std::vector<double> zonal_parallels(int n);

struct LaurentPoly2 {
  using Exponent = std::pair<std::int64_t, std::int64_t>;
  std::map<Exponent, cplx> terms;  // F(z) = sum a_xi z^xi
  Exponent shifts{0, 0};           // a_i = -min n_i; P = z^a F

  std::map<Exponent, cplx> shifted_terms() const;
  cplx evaluate_f(cplx z1, cplx z2) const;
  cplx evaluate_p(cplx z1, cplx z2) const;
  // P(e(x), e(y)) e(-(a1 x + a2 y)).
  cplx phi_value(double x, double y) const;
  bool z1_divides_p() const;
  bool z2_divides_p() const;
};

LaurentPoly2 to_laurent(const Eigenfunction& phi);

// m(m-1)/2 (2 genus - 2 + s).
std::int64_t abc_bound(std::int64_t m, std::int64_t genus, std::int64_t s);

struct FrequencyBoxReport {
  std::size_t frequencies = 0;  // r
  std::int64_t max_offset = 0;  // max over xi != xi0 of |xi - xi0|_inf
  std::int64_t abc = 0;         // abc_bound(r - 1, genus, s), with the m = 1 edge giving 0
  double bound = 0.0;           // abc / c_S
  bool passed = false;
  std::string note;
};

FrequencyBoxReport frequency_box_check(const Eigenfunction& phi, const LatticePoint& xi0, std::int64_t genus,
                                       std::int64_t s, double c_s);

struct GeodesicVerdict {
  bool closed = false;
  std::optional<LatticePoint> direction;  // primitive (q, p) with the line along it
  double residual = 0.0;                  // max distance of the samples to the fitted line
  double slope_error = 0.0;               // drift of the rational line over the sample extent
};

// Samples are points of T^2 in order along the segment; they are unwrapped
// by nearest integer shifts before the total-least-squares fit.
GeodesicVerdict is_closed_geodesic_segment(const std::vector<RealVec>& samples, double tol,
                                           std::int64_t max_denominator);

// Best rational approximation p/q of x with 1 <= q <= max_denominator.
std::pair<std::int64_t, std::int64_t> best_rational(double x, std::int64_t max_denominator);

}  // namespace toral
