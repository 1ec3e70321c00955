#pragma once

#include <complex>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include <boost/multiprecision/gmp.hpp>

namespace toral {

using BigInt = boost::multiprecision::mpz_int;
using Rational = boost::multiprecision::mpq_rational;

using cplx = std::complex<double>;
using RealVec = std::vector<double>;
using ComplexVec = std::vector<cplx>;

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Rational from a double, exactly (every finite double is a dyadic rational).
Rational exact_rational(double x);

// "p/q" or "p" when q == 1.
std::string to_string(const Rational& q);
Rational parse_rational(const std::string& text);

// e^{2 pi i s}, with s reduced mod 1 before scaling so accuracy does not
// degrade for large |s|.
cplx unit_phase(double s);

double dot(const RealVec& a, const RealVec& b);
double norm(const RealVec& a);

}  // namespace toral
