#include "toral/numeric.hpp"

#include <cmath>
#include <stdexcept>

#include "toral/errors.hpp"

namespace toral {

Rational exact_rational(double x) {
  if (!std::isfinite(x)) throw ValidationError("exact_rational: non-finite value");
  if (x == 0.0) return Rational(0);
  int exponent = 0;
  const double mantissa = std::frexp(x, &exponent);
  // mantissa * 2^53 is an exact integer for IEEE doubles.
  const auto scaled = static_cast<long long>(std::ldexp(mantissa, 53));
  Rational q{BigInt(scaled)};
  exponent -= 53;
  BigInt pow2 = BigInt(1) << std::abs(exponent);
  if (exponent >= 0) {
    q *= Rational(pow2);
  } else {
    q /= Rational(pow2);
  }
  return q;
}

std::string to_string(const Rational& q) {
  const BigInt num = boost::multiprecision::numerator(q);
  const BigInt den = boost::multiprecision::denominator(q);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

Rational parse_rational(const std::string& text) {
  try {
    const auto slash = text.find('/');
    if (slash == std::string::npos) {
      if (text.find_first_of(".eE") != std::string::npos) {
        return exact_rational(std::stod(text));
      }
      return Rational(BigInt(text));
    }
    const BigInt num(text.substr(0, slash));
    const BigInt den(text.substr(slash + 1));
    if (den == 0) throw ValidationError("zero denominator in '" + text + "'");
    return Rational(num, den);
  } catch (const ValidationError&) {
    throw;
  } catch (const std::exception&) {
    throw ValidationError("cannot parse rational '" + text + "'");
  }
}

cplx unit_phase(double s) {
  const double r = s - std::floor(s);
  return std::polar(1.0, kTwoPi * r);
}

double dot(const RealVec& a, const RealVec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm(const RealVec& a) { return std::sqrt(dot(a, a)); }

}  // namespace toral
