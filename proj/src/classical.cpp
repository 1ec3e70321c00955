#include "toral/classical.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "toral/errors.hpp"

namespace toral {

namespace mp = boost::multiprecision;
using Float256 = mp::number<mp::cpp_bin_float<256, mp::digit_base_2>>;

RationalPoly::RationalPoly(std::vector<Rational> ascending) : c_(std::move(ascending)) { trim(); }

RationalPoly RationalPoly::monomial(int degree, const Rational& c) {
  if (degree < 0) throw ValidationError("RationalPoly::monomial: negative degree");
  std::vector<Rational> v(degree + 1);
  v[degree] = c;
  return RationalPoly(std::move(v));
}

void RationalPoly::trim() {
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

Rational RationalPoly::coeff(int k) const {
  return k >= 0 && k < static_cast<int>(c_.size()) ? c_[k] : Rational(0);
}

Rational RationalPoly::leading() const { return c_.empty() ? Rational(0) : c_.back(); }

Rational RationalPoly::operator()(const Rational& x) const {
  Rational r = 0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) r = r * x + *it;
  return r;
}

double RationalPoly::eval(double x) const {
  double r = 0.0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) r = r * x + it->convert_to<double>();
  return r;
}

RationalPoly RationalPoly::monic() const {
  if (c_.empty()) return *this;
  const Rational l = leading();
  std::vector<Rational> v(c_);
  for (auto& c : v) c /= l;
  return RationalPoly(std::move(v));
}

RationalPoly RationalPoly::derivative() const {
  if (c_.size() <= 1) return {};
  std::vector<Rational> v(c_.size() - 1);
  for (std::size_t k = 1; k < c_.size(); ++k) v[k - 1] = c_[k] * static_cast<long>(k);
  return RationalPoly(std::move(v));
}

RationalPoly RationalPoly::antiderivative() const {
  if (c_.empty()) return {};
  std::vector<Rational> v(c_.size() + 1);
  for (std::size_t k = 0; k < c_.size(); ++k) v[k + 1] = c_[k] / static_cast<long>(k + 1);
  return RationalPoly(std::move(v));
}

Rational RationalPoly::integrate(const Rational& a, const Rational& b) const {
  const RationalPoly anti = antiderivative();
  return anti(b) - anti(a);
}

RationalPoly RationalPoly::reflected() const {
  std::vector<Rational> v(c_);
  for (std::size_t k = 1; k < v.size(); k += 2) v[k] = -v[k];
  return RationalPoly(std::move(v));
}

RationalPoly operator+(const RationalPoly& a, const RationalPoly& b) {
  std::vector<Rational> v(std::max(a.c_.size(), b.c_.size()));
  for (std::size_t k = 0; k < v.size(); ++k) v[k] = a.coeff(static_cast<int>(k)) + b.coeff(static_cast<int>(k));
  return RationalPoly(std::move(v));
}

RationalPoly operator-(const RationalPoly& a, const RationalPoly& b) { return a + Rational(-1) * b; }

RationalPoly operator*(const RationalPoly& a, const RationalPoly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<Rational> v(a.c_.size() + b.c_.size() - 1);
  for (std::size_t i = 0; i < a.c_.size(); ++i)
    for (std::size_t j = 0; j < b.c_.size(); ++j) v[i + j] += a.c_[i] * b.c_[j];
  return RationalPoly(std::move(v));
}

RationalPoly operator*(const Rational& s, const RationalPoly& a) {
  std::vector<Rational> v(a.c_);
  for (auto& c : v) c *= s;
  return RationalPoly(std::move(v));
}

std::string RationalPoly::str() const {
  if (c_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (int k = degree(); k >= 0; --k) {
    const Rational& c = c_[k];
    if (c == 0) continue;
    Rational mag = c < 0 ? Rational(-c) : c;
    if (first) {
      if (c < 0) os << "-";
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    first = false;
    const bool unit = mag == 1;
    if (!unit || k == 0) os << to_string(mag);
    if (k > 0) {
      if (!unit) os << "*";
      os << "x";
      if (k > 1) os << "^" << k;
    }
  }
  return os.str();
}

std::pair<RationalPoly, RationalPoly> divmod(const RationalPoly& a, const RationalPoly& b) {
  if (b.is_zero()) throw ValidationError("divmod: division by the zero polynomial");
  std::vector<Rational> q(std::max(0, a.degree() - b.degree() + 1));
  std::vector<Rational> r(a.coeffs());
  const Rational lb = b.leading();
  const int db = b.degree();
  for (int k = a.degree(); k >= db; --k) {
    const Rational f = r[k] / lb;
    if (f == 0) continue;
    q[k - db] = f;
    for (int j = 0; j <= db; ++j) r[k - db + j] -= f * b.coeffs()[j];
  }
  return {RationalPoly(std::move(q)), RationalPoly(std::move(r))};
}

RationalPoly gcd(RationalPoly a, RationalPoly b) {
  while (!b.is_zero()) {
    RationalPoly r = divmod(a, b).second;
    a = std::move(b);
    b = r.monic();
  }
  return a.monic();
}

RationalPoly legendre(int n) {
  if (n < 0) throw ValidationError("legendre: n must be nonnegative");
  std::vector<Rational> v(n + 1);
  for (int k = 0; 2 * k <= n; ++k) {
    BigInt c1 = 1, c2 = 1;
    // C(n, k) and C(2n - 2k, n) by multiplicative formulas.
    for (int i = 1; i <= k; ++i) c1 = c1 * (n - k + i) / i;
    for (int i = 1; i <= n; ++i) c2 = c2 * (n - 2 * k + i) / i;
    BigInt c = c1 * c2;
    if (k % 2) c = -c;
    v[n - 2 * k] = Rational(c, BigInt(1) << n);
  }
  return RationalPoly(std::move(v));
}

RationalPoly common_roots(int m, int n) {
  if (m == n) throw ValidationError("common_roots: m and n must differ");
  if (m < 0 || n < 0) throw ValidationError("common_roots: degrees must be nonnegative");
  return gcd(legendre(m), legendre(n));
}

std::vector<double> legendre_roots(int n) {
  if (n < 1) throw ValidationError("legendre_roots: n must be at least 1");
  const RationalPoly p = legendre(n);
  // Integer coefficients of L * P for exact sign evaluation.
  BigInt lcm = 1;
  for (const auto& c : p.coeffs()) {
    const BigInt den = mp::denominator(c);
    lcm = lcm / mp::gcd(lcm, den) * den;
  }
  std::vector<BigInt> ic;
  for (const auto& c : p.coeffs()) ic.push_back(mp::numerator(c) * (lcm / mp::denominator(c)));
  // sign of N^n P(k / N) = sum c_i k^i N^{n - i}
  std::vector<BigInt> npow(n + 1);
  auto sign_at = [&](std::int64_t k) {
    BigInt s = 0, kp = 1;
    for (int i = 0; i <= n; ++i) {
      s += ic[i] * kp * npow[n - i];
      kp *= k;
    }
    return s.sign();
  };
  std::vector<Float256> fc;
  for (const auto& c : p.coeffs()) fc.push_back(Float256(mp::numerator(c)) / Float256(mp::denominator(c)));
  auto eval = [&](const Float256& x) {
    Float256 r = 0;
    for (auto it = fc.rbegin(); it != fc.rend(); ++it) r = r * x + *it;
    return r;
  };

  for (std::int64_t big_n = 4 * n; ; big_n *= 2) {
    npow[0] = 1;
    for (int i = 1; i <= n; ++i) npow[i] = npow[i - 1] * big_n;
    std::vector<double> roots;
    int prev = sign_at(-big_n);
    for (std::int64_t k = -big_n + 1; k <= big_n; ++k) {
      const int s = sign_at(k);
      if (s == 0) {
        roots.push_back(static_cast<double>(k) / static_cast<double>(big_n));
        prev = 0;
        continue;
      }
      if (prev != 0 && s != prev) {
        Float256 lo = Float256(k - 1) / big_n, hi = Float256(k) / big_n;
        const bool lo_neg = prev < 0;
        for (int it = 0; it < 300; ++it) {
          const Float256 mid = (lo + hi) / 2;
          const Float256 v = eval(mid);
          if ((v < 0) == lo_neg) lo = mid;
          else hi = mid;
        }
        roots.push_back(((lo + hi) / 2).convert_to<double>());
      }
      prev = s;
    }
    if (static_cast<int>(roots.size()) == n) return roots;
    if (big_n > (std::int64_t{1} << 24)) throw NumericalError("legendre_roots: failed to isolate all roots");
  }
}

std::vector<double> zonal_parallels(int n) {
  std::vector<double> out;
  for (double x : legendre_roots(n)) out.push_back(std::acos(x));
  std::sort(out.begin(), out.end());
  return out;
}

std::map<LaurentPoly2::Exponent, cplx> LaurentPoly2::shifted_terms() const {
  std::map<Exponent, cplx> out;
  for (const auto& [e, a] : terms) out[{e.first + shifts.first, e.second + shifts.second}] = a;
  return out;
}

namespace {

cplx ipow(cplx z, std::int64_t k) {
  if (k < 0) return 1.0 / ipow(z, -k);
  cplx r = 1.0;
  while (k) {
    if (k & 1) r *= z;
    z *= z;
    k >>= 1;
  }
  return r;
}

}  // namespace

cplx LaurentPoly2::evaluate_f(cplx z1, cplx z2) const {
  cplx s{};
  for (const auto& [e, a] : terms) s += a * ipow(z1, e.first) * ipow(z2, e.second);
  return s;
}

cplx LaurentPoly2::evaluate_p(cplx z1, cplx z2) const {
  cplx s{};
  for (const auto& [e, a] : shifted_terms()) s += a * ipow(z1, e.first) * ipow(z2, e.second);
  return s;
}

cplx LaurentPoly2::phi_value(double x, double y) const {
  return evaluate_p(unit_phase(x), unit_phase(y)) *
         unit_phase(-(static_cast<double>(shifts.first) * x + static_cast<double>(shifts.second) * y));
}

bool LaurentPoly2::z1_divides_p() const {
  for (const auto& [e, a] : shifted_terms())
    if (e.first == 0 && a != cplx(0)) return false;
  return true;
}

bool LaurentPoly2::z2_divides_p() const {
  for (const auto& [e, a] : shifted_terms())
    if (e.second == 0 && a != cplx(0)) return false;
  return true;
}

LaurentPoly2 to_laurent(const Eigenfunction& phi) {
  if (phi.d() != 2) throw ValidationError("to_laurent: eigenfunction must live on T^2");
  LaurentPoly2 out;
  std::int64_t m1 = std::numeric_limits<std::int64_t>::max(), m2 = m1;
  for (const auto& [xi, a] : phi.coeffs()) {
    if (a == cplx(0)) continue;
    out.terms[{xi[0], xi[1]}] = a;
    m1 = std::min(m1, xi[0]);
    m2 = std::min(m2, xi[1]);
  }
  if (!out.terms.empty()) out.shifts = {-m1, -m2};
  return out;
}

std::int64_t abc_bound(std::int64_t m, std::int64_t genus, std::int64_t s) {
  if (m < 2) throw ValidationError("abc_bound: m must be at least 2");
  if (genus < 0 || s < 0) throw ValidationError("abc_bound: genus and s must be nonnegative");
  const __int128 v = static_cast<__int128>(m) * (m - 1) / 2 * (2 * static_cast<__int128>(genus) - 2 + s);
  if (v > std::numeric_limits<std::int64_t>::max() || v < std::numeric_limits<std::int64_t>::min()) {
    throw ValidationError("abc_bound: result overflows 64 bits");
  }
  return static_cast<std::int64_t>(v);
}

FrequencyBoxReport frequency_box_check(const Eigenfunction& phi, const LatticePoint& xi0, std::int64_t genus,
                                       std::int64_t s, double c_s) {
  if (!(c_s > 0.0)) throw ValidationError("frequency_box_check: c_S must be positive");
  if (genus < 0 || s < 0) throw ValidationError("frequency_box_check: genus and s must be nonnegative");
  if (xi0.dim() != static_cast<std::size_t>(phi.d())) throw ValidationError("frequency_box_check: xi0 has wrong dimension");
  FrequencyBoxReport rep;
  rep.frequencies = phi.support_size();
  for (const auto& [xi, a] : phi.coeffs()) {
    if (xi == xi0) continue;
    for (std::size_t i = 0; i < xi.dim(); ++i) rep.max_offset = std::max(rep.max_offset, std::abs(xi[i] - xi0[i]));
  }
  const auto r = static_cast<std::int64_t>(rep.frequencies);
  if (r >= 3) {
    rep.abc = abc_bound(r - 1, genus, s);
  } else {
    rep.abc = 0;  // m(m-1)/2 vanishes at m = 1
    rep.note = "the abc inequality needs r >= 3 frequencies; r = " + std::to_string(r) + " is the closed-geodesic case";
  }
  rep.bound = static_cast<double>(rep.abc) / c_s;
  rep.passed = static_cast<double>(rep.max_offset) <= rep.bound;
  return rep;
}

std::pair<std::int64_t, std::int64_t> best_rational(double x, std::int64_t max_denominator) {
  if (max_denominator < 1) throw ValidationError("best_rational: max_denominator must be positive");
  if (!std::isfinite(x)) throw ValidationError("best_rational: non-finite input");
  // Convergents p_k/q_k and, at the bound, the best semiconvergent.
  std::int64_t p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  double r = x;
  std::pair<std::int64_t, std::int64_t> best{static_cast<std::int64_t>(std::llround(x)), 1};
  for (int it = 0; it < 64; ++it) {
    const double fa = std::floor(r);
    if (std::abs(fa) > 9e15) break;
    const auto a = static_cast<std::int64_t>(fa);
    const std::int64_t q2 = a * q1 + q0;
    if (q2 > max_denominator) {
      const std::int64_t k = (max_denominator - q0) / q1;
      const std::int64_t ps = k * p1 + p0, qs = k * q1 + q0;
      const auto err = [&](std::int64_t p, std::int64_t q) { return std::abs(x - static_cast<double>(p) / q); };
      best = (qs >= 1 && err(ps, qs) < err(p1, q1)) ? std::pair{ps, qs} : std::pair{p1, q1};
      return best;
    }
    const std::int64_t p2 = a * p1 + p0;
    p0 = p1, q0 = q1, p1 = p2, q1 = q2;
    best = {p1, q1};
    const double frac = r - fa;
    if (frac < 1e-15) break;
    r = 1.0 / frac;
  }
  return best;
}

GeodesicVerdict is_closed_geodesic_segment(const std::vector<RealVec>& samples, double tol,
                                           std::int64_t max_denominator) {
  if (samples.size() < 3) throw ValidationError("closed geodesic test: need at least three samples");
  if (!(tol > 0.0)) throw ValidationError("closed geodesic test: tol must be positive");
  std::vector<RealVec> pts;
  for (const auto& s : samples) {
    if (s.size() != 2) throw ValidationError("closed geodesic test: samples must be points of T^2");
    RealVec p = s;
    if (!pts.empty()) {
      for (int i = 0; i < 2; ++i) p[i] -= std::round(p[i] - pts.back()[i]);
    }
    pts.push_back(p);
  }
  double cx = 0, cy = 0;
  for (const auto& p : pts) cx += p[0], cy += p[1];
  cx /= pts.size();
  cy /= pts.size();
  double sxx = 0, sxy = 0, syy = 0;
  for (const auto& p : pts) {
    const double dx = p[0] - cx, dy = p[1] - cy;
    sxx += dx * dx, sxy += dx * dy, syy += dy * dy;
  }
  if (sxx + syy < 1e-24) throw DegenerateInput("closed geodesic test: samples coincide");
  // Principal direction of the 2x2 scatter matrix.
  const double ang = 0.5 * std::atan2(2 * sxy, sxx - syy);
  const double ux = std::cos(ang), uy = std::sin(ang);
  GeodesicVerdict v;
  double lo = 0.0, hi = 0.0;
  for (const auto& p : pts) {
    const double dx = p[0] - cx, dy = p[1] - cy;
    v.residual = std::max(v.residual, std::abs(-uy * dx + ux * dy));
    const double along = ux * dx + uy * dy;
    lo = std::min(lo, along);
    hi = std::max(hi, along);
  }
  const double extent = hi - lo;
  // Slope in the better-conditioned orientation.
  const bool steep = std::abs(uy) > std::abs(ux);
  const double slope = steep ? ux / uy : uy / ux;
  const auto [p, q] = best_rational(slope, max_denominator);
  const double rational = static_cast<double>(p) / q;
  v.slope_error = std::abs(slope - rational) * extent / std::sqrt(1.0 + slope * slope);
  if (v.residual < tol && v.slope_error < tol) {
    v.closed = true;
    const std::int64_t g = std::gcd(std::abs(p), q);
    v.direction = steep ? LatticePoint{p / g, q / g} : LatticePoint{q / g, p / g};
  }
  return v;
}

}  // namespace toral
