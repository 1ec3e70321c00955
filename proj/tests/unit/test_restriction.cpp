#include <doctest.h>

#include <cmath>
#include <random>

#include "toral/errors.hpp"
#include "toral/restriction.hpp"

using namespace toral;

namespace {

const LatticePoint kXi0{74, 7};

ComplexPatch parabola_patch(int n = 32) {
  PatchOptions opt;
  opt.n_t = n;
  return build_patch(AnalyticGraph::parse(2, "0.5*x1^2"), ShiftFrame::from(kXi0).v0, 0.05, opt);
}

// Brute-force mean square straight from phi^C: |phi(Z)|^2 |e^{-2 pi i <xi0, Z>}|^2.
double brute_mean_square(const ComplexPatch& p, const Eigenfunction& phi, const LatticePoint& xi0) {
  double s = 0.0;
  for (const auto& n : p.nodes) {
    cplx ph{};
    for (int i = 0; i < p.d(); ++i) ph += static_cast<double>(xi0[i]) * n.z[i];
    s += n.weight * std::norm(phi.evaluate_complex(n.z, 1e3) * std::exp(cplx(0, -2 * M_PI) * ph));
  }
  return s;
}

}  // namespace

TEST_CASE("mean square of a single frequency is the bump mass") {
  const auto p = parabola_patch();
  const auto frame = ShiftFrame::from(kXi0);
  Eigenfunction phi(2, 5525, {{kXi0, cplx(1, 0)}});
  CHECK(mean_square(p, phi, frame) == doctest::Approx(p.mass()).epsilon(1e-12));
  CHECK_THROWS_AS(mean_square(p, phi, ShiftFrame::from({7, 74})), MismatchedFrame);
}

TEST_CASE("mean square agrees with the unshifted holomorphic extension") {
  const auto shell = enumerate_shell(2, 5525);
  const auto p = parabola_patch(16);
  const auto frame = ShiftFrame::from(kXi0);
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const auto phi = random_eigenfunction(shell, seed, seed == 2);
    const double ms = mean_square(p, phi, frame);
    CHECK(ms >= 0.0);
    CHECK(ms == doctest::Approx(brute_mean_square(p, phi, kXi0)).epsilon(1e-8));
  }
}

TEST_CASE("mean square grows with the base coefficient") {
  const auto p = parabola_patch();
  const auto frame = ShiftFrame::from(kXi0);
  double prev = -1.0;
  for (double a0 : {0.5, 1.0, 2.0, 4.0}) {
    Eigenfunction phi(2, 5525, {{kXi0, cplx(a0, 0)}, {LatticePoint{73, 14}, cplx(0.3, 0.1)}});
    const double ms = mean_square(p, phi, frame);
    CHECK(ms > prev);
    prev = ms;
  }
}

TEST_CASE("geodesic vanisher has zero mean square on its own line") {
  // sin 2 pi (3x + 4y) vanishes on y = -3x/4; xi0 = (4, -3) makes v0 tangent data match.
  const LatticePoint xi0{4, -3};
  const auto frame = ShiftFrame::from(xi0);
  PatchOptions opt;
  opt.allow_degenerate = true;
  const auto p = build_patch(AnalyticGraph::parse(2, "-0.75*x1"), frame.v0, 0.05, opt);
  const auto phi = make_geodesic_vanisher({3, 4}, 0.0, 1);
  CHECK(mean_square(p, phi, frame) < 1e-10);
  const auto other = make_geodesic_vanisher({4, 3}, 0.0, 1);
  CHECK(mean_square(p, other, frame) > 1e-6);
}

TEST_CASE("real restriction norms") {
  const auto phi = make_geodesic_vanisher({1, 0}, 0.0, 1);
  CHECK(real_restriction_norm(segment_sample({0.0, 0.0}, {0.0, 1.0}, 40), phi) < 1e-28);
  // |sin 2 pi x|^2 along y = 0 over [0,1] integrates to 1 (times 2 from the sqrt 2).
  CHECK(real_restriction_norm(segment_sample({0.0, 0.2}, {1.0, 0.2}, 40), phi) == doctest::Approx(1.0).epsilon(1e-12));

  // Unit circle arc: constant function 1 has restriction norm = arc length.
  Eigenfunction one(2, 0, {{LatticePoint{0, 0}, cplx(1, 0)}});
  CHECK(real_restriction_norm(circle_arc_sample({0.5, 0.5}, 0.3, 0.0, 2.0, 30), one) ==
        doctest::Approx(0.6).epsilon(1e-13));

  const auto shell = enumerate_shell(2, 1105);
  const auto arc = circle_arc_sample({0.5, 0.5}, 0.3, 0.0, 2 * M_PI, 400);
  double min_ratio = 1e300;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto phi_r = random_eigenfunction(shell, seed, true);
    min_ratio = std::min(min_ratio, real_restriction_norm(arc, phi_r) / phi_r.l2_mass());
  }
  CHECK(min_ratio > 0.0);

  // Irrational slope: no sampled eigenfunction vanishes identically.
  const double s = std::sqrt(2.0);
  const auto seg = segment_sample({0.1, 0.1}, {0.1 + 0.5, 0.1 + 0.5 * s}, 200);
  for (std::uint64_t seed = 0; seed < 5; ++seed) CHECK(restriction_sup(seg, random_eigenfunction(shell, seed, true)) > 1e-3);

  auto g = AnalyticGraph::parse(3, "0.5*(x1^2 + x2^2)");
  const auto gs = graph_sample(g, {0.0, 0.0}, 0.1, 12);
  CHECK(real_restriction_norm(gs, Eigenfunction(3, 0, {{LatticePoint{0, 0, 0}, cplx(1, 0)}})) > 0.04);
}

TEST_CASE("base case bound") {
  const auto p = parabola_patch();
  const auto frame = ShiftFrame::from(kXi0);
  const LatticePoint xi{73, 14};
  auto b0 = base_case_bound(p, frame, kXi0, xi, cplx(1, 0), cplx(0, 0));
  CHECK(b0.constant == doctest::Approx(p.mass()).epsilon(1e-14));
  CHECK(b0.direct >= b0.bound * (1 - 1e-12));

  std::mt19937_64 rng(11);
  std::normal_distribution<double> g(0.0, 1.0);
  const auto shell = enumerate_shell(2, 5525);
  for (int k = 0; k < 40; ++k) {
    const auto& x1 = shell.points[rng() % shell.size()];
    const auto& x2 = shell.points[rng() % shell.size()];
    if (x1 == x2) continue;
    const cplx a(g(rng), g(rng)), b(g(rng), g(rng));
    const auto bc = base_case_bound(p, frame, x1, x2, a, b);
    CHECK(bc.direct + 1e-15 >= bc.bound);
    CHECK(bc.constant >= 0.0);
    // Direct value against the two-term eigenfunction.
    Eigenfunction two(2, 5525, {{x1, a}, {x2, b}});
    CHECK(bc.direct == doctest::Approx(mean_square(p, two, frame)).epsilon(1e-10));
  }
  auto eq = base_case_bound(p, frame, LatticePoint{62, 41}, LatticePoint{73, -14}, cplx(1, 0), cplx(1, 0));
  CHECK(eq.constant > 0.0);
  CHECK_THROWS_AS(base_case_bound(p, frame, xi, xi, cplx(1, 0), cplx(1, 0)), ValidationError);
}

TEST_CASE("certificate for a single frequency") {
  const auto p = parabola_patch();
  const auto frame = ShiftFrame::from(kXi0);
  Eigenfunction phi(2, 5525, {{kXi0, cplx(1, 0)}});
  const auto c = lower_bound_certificate(p, phi, frame, ClusterParams{});
  CHECK(c.offdiag_bound == 0.0);
  CHECK(c.constant == doctest::Approx(p.mass()));
  CHECK(c.verdict == doctest::Approx(p.mass()));
  CHECK(c.tree.leaf);
}

TEST_CASE("certificate soundness on random eigenfunctions") {
  const auto shell = enumerate_shell(2, 5525);
  const auto p = parabola_patch();
  const auto frame = ShiftFrame::from(kXi0);
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    auto phi = random_eigenfunction(shell, seed);
    const auto c = lower_bound_certificate(p, phi, frame, ClusterParams{});
    CHECK(c.offdiag_bound >= 0.0);
    CHECK(c.verdict == doctest::Approx(c.constant * c.diagonal_sum - c.offdiag_bound));
    CHECK(mean_square(p, phi, frame) >= c.verdict - 1e-12);
    // Leaves never hold more than two frequencies.
    std::vector<const CertificateNode*> stack{&c.tree};
    while (!stack.empty()) {
      const auto* n = stack.back();
      stack.pop_back();
      if (n->leaf) CHECK(n->frequencies.size() <= 2);
      for (const auto& ch : n->children) stack.push_back(&ch);
    }
  }
  // Antipodal pair on the small shell with xi0 = (5, 0).
  const LatticePoint x0{5, 0};
  const auto f2 = ShiftFrame::from(x0);
  PatchOptions opt;
  opt.allow_degenerate = true;
  const auto flat = build_patch(AnalyticGraph::parse(2, "0*x1"), f2.v0, 0.05, opt);
  Eigenfunction pair(2, 25, {{x0, cplx(1, 0)}, {LatticePoint{-5, 0}, cplx(1, 0)}});
  const auto c2 = lower_bound_certificate(flat, pair, f2, ClusterParams{});
  CHECK(mean_square(flat, pair, f2) >= c2.verdict);
}

TEST_CASE("reflections") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int k = 0; k < 50; ++k) {
    RealVec u(3), x(3);
    for (auto& c : u) c = g(rng);
    for (auto& c : x) c = g(rng);
    const double n = norm(u);
    for (auto& c : u) c /= n;
    const auto y = reflect(u, x);
    CHECK(norm(y) == doctest::Approx(norm(x)).epsilon(1e-14));
    const auto back = reflect(u, y);
    for (int i = 0; i < 3; ++i) CHECK(std::abs(back[i] - x[i]) < 1e-14);
    const auto mu = reflect(u, u);
    for (int i = 0; i < 3; ++i) CHECK(std::abs(mu[i] + u[i]) < 1e-15);
  }
  // In the plane, tau_{u1} tau_u rotates by twice the angle from u to u1.
  for (int k = 0; k < 20; ++k) {
    const double a = g(rng), b = g(rng), phi = g(rng);
    const RealVec u{std::cos(a), std::sin(a)}, u1{std::cos(b), std::sin(b)}, x{std::cos(phi), std::sin(phi)};
    const auto y = reflect(u1, reflect(u, x));
    const double rot = 2 * (b - a);
    CHECK(std::abs(y[0] - std::cos(phi + rot)) < 1e-13);
    CHECK(std::abs(y[1] - std::sin(phi + rot)) < 1e-13);
  }
  CHECK_THROWS_AS(reflect({1.0, 1.0}, {1.0, 0.0}), ValidationError);
}

TEST_CASE("epsilon estimates") {
  // d = 2: the reflected set is an arc of half-width 2 delta.
  for (double delta : {0.05, 0.2, 0.4}) {
    const auto e = estimate_epsilon(2, {0.0, 1.0}, delta, {0.6, 0.8});
    CHECK(e.epsilon == doctest::Approx(2 * delta).epsilon(0.02));
  }
  const auto tiny = estimate_epsilon(3, {0.0, 0.0, 1.0}, 1e-4, {0.6, 0.0, 0.8});
  CHECK(tiny.epsilon < 1e-3);
  // Rotating u0 and w together leaves epsilon unchanged.
  const RealVec u0{0.0, 0.0, 1.0}, w{0.6, 0.0, 0.8};
  const double c = std::cos(0.7), s = std::sin(0.7);
  auto rot = [&](const RealVec& v) { return RealVec{c * v[0] - s * v[2], v[1], s * v[0] + c * v[2]}; };
  const auto e1 = estimate_epsilon(3, u0, 0.3, w);
  const auto e2 = estimate_epsilon(3, rot(u0), 0.3, rot(w));
  CHECK(e1.epsilon == doctest::Approx(e2.epsilon).epsilon(0.05));
  // Membership is exact: the centre and a point inside the cap are reflections.
  CHECK(in_reflected_set(u0, 0.3, w, e1.w1));
  CHECK(in_reflected_set(u0, 0.3, w, reflect(u0, w)));
}

TEST_CASE("cap propagation") {
  const double delta0 = 0.08;
  const auto r = cap_propagate(Cap({1.0, 0.0}, 0.5), {0.0, 1.0}, 0.6, delta0);
  CHECK(r.full_sphere);
  CHECK(r.iterations <= static_cast<int>(std::ceil(M_PI / delta0)));
  for (std::size_t i = 1; i < r.steps.size(); ++i) {
    CHECK(r.steps[i].probe_failures == 0);
    const double gain = r.steps[i].cap.angle - r.steps[i - 1].cap.angle;
    CHECK((gain >= delta0 - 1e-12 || r.steps[i].cap.angle >= M_PI));
  }
  CHECK_THROWS_AS(cap_propagate(Cap({1.0, 0.0}, 0.5), {0.0, 1.0}, 0.6, 0.2), PreconditionViolated);
  CHECK_THROWS_AS(cap_propagate(Cap({1.0, 0.0}, 0.2), {0.0, 1.0}, 0.6, 0.08), PreconditionViolated);
}
