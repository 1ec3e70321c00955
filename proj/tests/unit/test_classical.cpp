#include <doctest.h>

#include <cmath>
#include <random>

#include "toral/classical.hpp"
#include "toral/errors.hpp"

using namespace toral;

namespace {

// Three-term recurrence (n+1) P_{n+1} = (2n+1) x P_n - n P_{n-1}.
std::vector<RationalPoly> recurrence(int nmax) {
  std::vector<RationalPoly> p{RationalPoly({1}), RationalPoly({0, 1})};
  const RationalPoly x({0, 1});
  for (int n = 1; n < nmax; ++n) {
    p.push_back(Rational(1, n + 1) * (Rational(2 * n + 1) * (x * p[n]) - Rational(n) * p[n - 1]));
  }
  return p;
}

// P_n(x) by the recurrence in long double; stable on [-1, 1].
long double legendre_value(int n, long double x) {
  long double p0 = 1, p1 = x;
  if (n == 0) return p0;
  for (int k = 1; k < n; ++k) {
    const long double p2 = ((2 * k + 1) * x * p1 - k * p0) / (k + 1);
    p0 = p1;
    p1 = p2;
  }
  return p1;
}

}  // namespace

TEST_CASE("legendre closed formula") {
  CHECK(legendre(0) == RationalPoly({1}));
  CHECK(legendre(1) == RationalPoly({0, 1}));
  CHECK(legendre(2) == RationalPoly({Rational(-1, 2), 0, Rational(3, 2)}));
  const auto rec = recurrence(60);
  for (int n = 0; n <= 60; ++n) CHECK(legendre(n) == rec[n]);
  for (int n = 0; n <= 50; ++n) {
    const auto p = legendre(n);
    CHECK(p.reflected() == (n % 2 ? Rational(-1) * p : p));
    CHECK(p(Rational(1)) == 1);
  }
  CHECK(legendre(3).str() == "5/2*x^3 - 3/2*x");
}

TEST_CASE("orthogonality") {
  for (int m = 0; m <= 20; ++m)
    for (int n = 0; n <= 20; ++n) {
      const Rational v = (legendre(m) * legendre(n)).integrate(-1, 1);
      if (m == n) CHECK(v == Rational(2, 2 * n + 1));
      else CHECK(v == 0);
    }
}

TEST_CASE("polynomial division and gcd") {
  const RationalPoly a({-1, 0, 1});   // x^2 - 1
  const RationalPoly b({1, 1});       // x + 1
  const auto [q, r] = divmod(a, b);
  CHECK(q == RationalPoly({-1, 1}));
  CHECK(r.is_zero());
  CHECK(gcd(a, b) == RationalPoly({1, 1}));
  CHECK(gcd(Rational(7, 3) * a, Rational(-2) * b) == RationalPoly({1, 1}));
  CHECK_THROWS_AS(divmod(a, RationalPoly()), ValidationError);
}

TEST_CASE("common roots of Legendre polynomials") {
  const RationalPoly x({0, 1}), one({1});
  CHECK(common_roots(3, 5) == x);
  CHECK(common_roots(2, 4) == one);
  for (int m = 1; m < 20; ++m)
    for (int n = m + 1; n <= 20; ++n) CHECK(common_roots(m, n) == ((m % 2 && n % 2) ? x : one));
  CHECK_THROWS_AS(common_roots(3, 3), ValidationError);
}

TEST_CASE("zonal parallels") {
  const auto p1 = zonal_parallels(1);
  REQUIRE(p1.size() == 1);
  CHECK(p1[0] == doctest::Approx(M_PI / 2).epsilon(1e-15));
  const auto p2 = zonal_parallels(2);
  REQUIRE(p2.size() == 2);
  CHECK(p2[0] == doctest::Approx(std::acos(1 / std::sqrt(3.0))).epsilon(1e-15));
  CHECK(p2[1] == doctest::Approx(std::acos(-1 / std::sqrt(3.0))).epsilon(1e-15));
  for (int n = 1; n <= 30; ++n) {
    const auto roots = legendre_roots(n);
    CHECK(static_cast<int>(roots.size()) == n);
    for (double r : roots) {
      // a sign change of P_n across [r - h, r + h] pins the root to within h
      const long double h = 1e-13L;
      CHECK(legendre_value(n, r - h) * legendre_value(n, r + h) <= 0);
    }
    for (std::size_t i = 1; i < roots.size(); ++i) CHECK(roots[i] > roots[i - 1]);
    if (n % 2) {
      const auto par = zonal_parallels(n);
      CHECK(std::find(par.begin(), par.end(), M_PI / 2) != par.end());
    }
  }
}

TEST_CASE("Laurent form of planar eigenfunctions") {
  Eigenfunction e1(2, 1, {{LatticePoint{1, 0}, cplx(1, 0)}});
  const auto l1 = to_laurent(e1);
  CHECK(l1.terms.size() == 1);
  CHECK(l1.terms.count({1, 0}) == 1);  // F = z1
  CHECK(l1.shifts == LaurentPoly2::Exponent{-1, 0});
  CHECK(l1.shifted_terms().count({0, 0}) == 1);

  Eigenfunction e2(2, 1, {{LatticePoint{-1, 0}, cplx(1, 0)}, {LatticePoint{0, 1}, cplx(1, 0)}});
  const auto l2 = to_laurent(e2);
  CHECK(l2.shifts == LaurentPoly2::Exponent{1, 0});
  const auto p = l2.shifted_terms();
  CHECK(p.size() == 2);
  CHECK(p.count({0, 0}) == 1);
  CHECK(p.count({1, 1}) == 1);  // P = 1 + z1 z2
  CHECK_FALSE(l2.z1_divides_p());
  CHECK_FALSE(l2.z2_divides_p());

  const auto shell = enumerate_shell(2, 65);
  const auto phi = random_eigenfunction(shell, 9);
  const auto l = to_laurent(phi);
  CHECK_FALSE(l.z1_divides_p());
  CHECK_FALSE(l.z2_divides_p());
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 100; ++k) {
    const double x = u(rng), y = u(rng);
    CHECK(std::abs(l.phi_value(x, y) - phi.evaluate({x, y})) < 1e-10);
    CHECK(std::abs(l.evaluate_f(unit_phase(x), unit_phase(y)) - phi.evaluate({x, y})) < 1e-10);
  }
  CHECK_THROWS_AS(to_laurent(Eigenfunction(3, 1, {{LatticePoint{1, 0, 0}, cplx(1, 0)}})), ValidationError);
}

TEST_CASE("abc arithmetic") {
  CHECK(abc_bound(3, 0, 3) == 3);
  for (int g = 0; g < 5; ++g)
    for (int s = 0; s < 8; ++s) CHECK(abc_bound(2, g, s) == 2 * g - 2 + s);
  for (int m = 2; m < 8; ++m)
    for (int g = 0; g < 4; ++g)
      for (int s = 3; s < 8; ++s) {
        CHECK(abc_bound(m + 1, g, s) >= abc_bound(m, g, s));
        CHECK(abc_bound(m, g + 1, s) >= abc_bound(m, g, s));
        CHECK(abc_bound(m, g, s + 1) >= abc_bound(m, g, s));
      }
  CHECK_THROWS_AS(abc_bound(1, 0, 3), ValidationError);
  CHECK_THROWS_AS(abc_bound(3, -1, 3), ValidationError);
}

TEST_CASE("frequency box check") {
  const auto shell = enumerate_shell(2, 25);
  const auto phi = random_eigenfunction(shell, 1);
  const LatticePoint xi0{5, 0};
  const auto rep = frequency_box_check(phi, xi0, 0, 24, 1.0);
  CHECK(rep.frequencies == 12);
  CHECK(rep.max_offset == 10);
  CHECK(rep.abc == 55 * 22);
  CHECK(rep.passed);
  const auto fail = frequency_box_check(phi, xi0, 0, 3, 100.0);
  CHECK_FALSE(fail.passed);
  Eigenfunction two(2, 25, {{xi0, cplx(1, 0)}, {LatticePoint{3, 4}, cplx(1, 0)}});
  const auto r2 = frequency_box_check(two, xi0, 0, 3, 1.0);
  CHECK_FALSE(r2.note.empty());
  CHECK(r2.abc == 0);
}

TEST_CASE("closed geodesic recognition") {
  std::vector<RealVec> diag;
  for (int k = 0; k < 50; ++k) {
    const double x = 0.013 * k;
    diag.push_back({x, std::fmod(x + 0.3, 1.0)});
  }
  const auto v = is_closed_geodesic_segment(diag, 1e-9, 50);
  CHECK(v.closed);
  REQUIRE(v.direction.has_value());
  CHECK(*v.direction == LatticePoint{1, 1});

  std::vector<RealVec> steep;
  for (int k = 0; k < 30; ++k) steep.push_back({std::fmod(0.1 + 0.02 * k, 1.0), std::fmod(0.5 + 0.06 * k, 1.0)});
  const auto vs = is_closed_geodesic_segment(steep, 1e-9, 50);
  CHECK(vs.closed);
  CHECK(*vs.direction == LatticePoint{1, 3});

  std::vector<RealVec> arc;
  for (int k = 0; k < 30; ++k) arc.push_back({0.5 + 0.3 * std::cos(0.05 * k), 0.5 + 0.3 * std::sin(0.05 * k)});
  CHECK_FALSE(is_closed_geodesic_segment(arc, 1e-6, 50).closed);

  std::vector<RealVec> irr;
  for (int k = 0; k < 40; ++k) irr.push_back({0.02 * k, std::fmod(std::sqrt(2.0) * 0.02 * k, 1.0)});
  const auto vi = is_closed_geodesic_segment(irr, 1e-8, 50);
  CHECK(vi.residual < 1e-12);
  CHECK_FALSE(vi.closed);

  CHECK(best_rational(std::sqrt(2.0), 50) == std::pair<std::int64_t, std::int64_t>{41, 29});
  CHECK(best_rational(M_PI, 1000) == std::pair<std::int64_t, std::int64_t>{355, 113});
  CHECK_THROWS_AS(is_closed_geodesic_segment({{0.1, 0.1}, {0.1, 0.1}, {0.1, 0.1}}, 1e-6, 10), DegenerateInput);
}
