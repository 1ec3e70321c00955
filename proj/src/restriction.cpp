#include "toral/restriction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "toral/errors.hpp"
#include "toral/quadrature.hpp"

namespace toral {

namespace {

double lattice_dot(const LatticePoint& xi, const RealVec& x) {
  double s = 0.0;
  for (std::size_t i = 0; i < xi.dim(); ++i) s += static_cast<double>(xi[i]) * x[i];
  return s;
}

RealVec imag_part(const ComplexVec& z) {
  RealVec out(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) out[i] = z[i].imag();
  return out;
}

// e^{2 pi i <xi - xi0, Z>} from the tabulated node.
cplx shifted_exponential(const LatticePoint& diff, const PatchNode& n, const RealVec& im) {
  return unit_phase(lattice_dot(diff, n.g)) * std::exp(-kTwoPi * lattice_dot(diff, im));
}

void check_unit(const RealVec& u, const char* who) {
  if (std::abs(norm(u) - 1.0) > 1e-9) throw ValidationError(std::string(who) + ": expected a unit vector");
}

RealVec normalized(RealVec v) {
  const double n = norm(v);
  for (double& c : v) c /= n;
  return v;
}

}  // namespace

double mean_square(const ComplexPatch& patch, const Eigenfunction& phi, const ShiftFrame& frame) {
  check_frame(patch, frame);
  if (phi.d() != patch.d()) throw ValidationError("mean_square: eigenfunction and patch dimensions differ");
  if (phi.r2() != frame.r2) throw MismatchedFrame("mean_square: frame on another shell");
  double s = 0.0;
  for (const auto& n : patch.nodes) {
    if (n.weight == 0.0) continue;
    s += n.weight * std::norm(shifted_value(phi, frame, n.z));
  }
  return s;
}

RestrictionSample segment_sample(const RealVec& a, const RealVec& b, int n) {
  if (a.size() != b.size()) throw ValidationError("segment_sample: endpoint dimensions differ");
  RealVec diff(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) diff[i] = b[i] - a[i];
  const double len = norm(diff);
  const GaussRule rule = gauss_legendre(n, 0.0, 1.0);
  RestrictionSample out;
  for (int k = 0; k < n; ++k) {
    RealVec p(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) p[i] = a[i] + rule.nodes[k] * diff[i];
    out.points.push_back(std::move(p));
    out.weights.push_back(rule.weights[k] * len);
  }
  return out;
}

RestrictionSample circle_arc_sample(const RealVec& center, double radius, double theta0,
                                    double theta1, int n) {
  if (center.size() < 2) throw ValidationError("circle_arc_sample: need at least two coordinates");
  if (!(radius > 0.0)) throw ValidationError("circle_arc_sample: radius must be positive");
  const GaussRule rule = gauss_legendre(n, theta0, theta1);
  RestrictionSample out;
  for (int k = 0; k < n; ++k) {
    RealVec p = center;
    p[0] += radius * std::cos(rule.nodes[k]);
    p[1] += radius * std::sin(rule.nodes[k]);
    out.points.push_back(std::move(p));
    out.weights.push_back(rule.weights[k] * radius);
  }
  return out;
}

RestrictionSample graph_sample(const AnalyticGraph& s, const RealVec& center, double half_width, int n) {
  const int m = s.params();
  if (center.size() != static_cast<std::size_t>(m)) throw ValidationError("graph_sample: center has wrong dimension");
  const GaussRule rule = gauss_legendre(n, -half_width, half_width);
  RestrictionSample out;
  std::vector<int> idx(m, 0);
  while (true) {
    RealVec x(m);
    double w = 1.0;
    for (int a = 0; a < m; ++a) {
      x[a] = center[a] + rule.nodes[idx[a]];
      w *= rule.weights[idx[a]];
    }
    const RealVec g = s.gradient(x);
    RealVec p = x;
    p.push_back(s.value(x));
    out.points.push_back(std::move(p));
    out.weights.push_back(w * std::sqrt(1.0 + dot(g, g)));
    int a = m - 1;
    while (a >= 0 && ++idx[a] == n) idx[a--] = 0;
    if (a < 0) break;
  }
  return out;
}

double real_restriction_norm(const RestrictionSample& sample, const Eigenfunction& phi) {
  if (sample.points.size() != sample.weights.size()) throw ValidationError("restriction sample: size mismatch");
  const auto vals = phi.evaluate_many(sample.points);
  double s = 0.0;
  for (std::size_t i = 0; i < vals.size(); ++i) s += sample.weights[i] * std::norm(vals[i]);
  return s;
}

double restriction_sup(const RestrictionSample& sample, const Eigenfunction& phi) {
  double m = 0.0;
  for (const auto& v : phi.evaluate_many(sample.points)) m = std::max(m, std::abs(v));
  return m;
}

BaseCaseBound base_case_bound(const ComplexPatch& patch, const ShiftFrame& frame, const LatticePoint& xi,
                              const LatticePoint& xi_prime, cplx a, cplx a_prime) {
  check_frame(patch, frame);
  if (xi == xi_prime) throw ValidationError("base_case_bound: needs two distinct frequencies");
  const double h = shift_height(frame, xi);
  const double hp = shift_height(frame, xi_prime);
  const LatticePoint e = xi - frame.xi0;
  const LatticePoint ep = xi_prime - frame.xi0;
  const LatticePoint delta = xi - xi_prime;
  const double mass = patch.mass();

  BaseCaseBound out;
  out.diagonal = std::norm(a) * std::exp(-4.0 * kTwoPi * patch.tau * h) +
                 std::norm(a_prime) * std::exp(-4.0 * kTwoPi * patch.tau * hp);
  const bool single = std::abs(a) == 0.0 || std::abs(a_prime) == 0.0;
  const cplx rel = single ? cplx(1.0) : a * std::conj(a_prime) / (std::abs(a) * std::abs(a_prime));

  constexpr int kDeltas = 9;
  std::vector<double> s_mass(kDeltas, 0.0);
  for (const auto& n : patch.nodes) {
    if (n.weight == 0.0) continue;
    const RealVec im = imag_part(n.z);
    out.direct += n.weight * std::norm(a * shifted_exponential(e, n, im) + a_prime * shifted_exponential(ep, n, im));
    const double c = (rel * unit_phase(lattice_dot(delta, n.g))).real();
    for (int k = 0; k < kDeltas; ++k)
      if (c >= -1.0 + 0.1 * (k + 1)) s_mass[k] += n.weight;
  }
  if (single) {
    // One term only: |a|^2 e^{-4 pi t A} psi >= |a|^2 e^{-8 pi tau A} psi.
    out.constant = mass;
    out.best_delta = 1.0;
    out.s_mass = mass;
  } else {
    for (int k = 0; k < kDeltas; ++k) {
      const double dlt = 0.1 * (k + 1);
      if (dlt * s_mass[k] > out.constant) {
        out.constant = dlt * s_mass[k];
        out.best_delta = dlt;
        out.s_mass = s_mass[k];
      }
    }
  }
  out.bound = out.constant * out.diagonal;
  return out;
}

namespace {

struct TreeBuilder {
  const ComplexPatch& patch;
  const ShiftFrame& frame;
  const Eigenfunction& phi;
  const LatticeShell& sub;
  const ClusterParams& params;
  double mass;
  std::vector<int> leaf_of;
  int leaves = 0;

  double weight(const LatticePoint& xi) const {
    return std::norm(phi.coeff(xi)) * std::exp(-4.0 * kTwoPi * patch.tau * shift_height(frame, xi));
  }

  CertificateNode build(const IndexSet& set, double rho) {
    CertificateNode node;
    std::vector<LatticePoint> pts;
    for (auto i : set) pts.push_back(sub.points[i]);
    node.frequencies = pts;
    for (const auto& p : pts) node.diagonal += weight(p);
    if (affine_rank(pts) <= 1) {
      if (pts.size() > 2) throw BaseCaseFailure("certificate: a collinear leaf holds more than two frequencies");
      node.leaf = true;
      if (pts.size() == 1) {
        node.constant = mass;
      } else {
        const auto bc = base_case_bound(patch, frame, pts[0], pts[1], phi.coeff(pts[0]), phi.coeff(pts[1]));
        node.constant = bc.constant;
        node.best_delta = bc.best_delta;
      }
      for (auto i : set) leaf_of[i] = leaves;
      ++leaves;
      return node;
    }
    // Distinct lattice points are at distance >= 1, so rho < 1 always splits.
    ClusterDecomposition dec;
    while (true) {
      ClusterParams p = params;
      p.rho = rho;
      dec = cluster_decompose(sub, set, p);
      if (dec.clusters.size() > 1) break;
      rho /= 2.0;
    }
    node.rho = rho;
    node.constant = std::numeric_limits<double>::infinity();
    for (const auto& c : dec.clusters) {
      node.children.push_back(build(c, rho / 2.0));
      node.constant = std::min(node.constant, node.children.back().constant);
    }
    return node;
  }
};

}  // namespace

Certificate lower_bound_certificate(const ComplexPatch& patch, const Eigenfunction& phi,
                                    const ShiftFrame& frame, const ClusterParams& params,
                                    std::optional<double> cutoff) {
  check_frame(patch, frame);
  if (phi.d() != patch.d()) throw ValidationError("certificate: eigenfunction and patch dimensions differ");
  if (phi.r2() != frame.r2) throw MismatchedFrame("certificate: frame on another shell");
  const int d = phi.d();
  Certificate cert;
  cert.tau = patch.tau;
  cert.cutoff = cutoff.value_or(default_cutoff(frame.lambda()));
  const ShortSupport ss = short_support(phi, frame, cert.cutoff);
  cert.short_count = ss.frequencies.size();

  LatticeShell sub;
  sub.d = d;
  sub.r2 = phi.r2();
  sub.points = ss.frequencies;
  std::sort(sub.points.begin(), sub.points.end());

  double rho = params.rho;
  if (!(rho > 0.0)) {
    rho = std::exp(params.constants(d).delta.convert_to<double>() *
                   std::log(frame.lambda()));
  }
  const double mass = patch.mass();
  TreeBuilder tb{patch, frame, phi, sub, params, mass, std::vector<int>(sub.size(), -1)};
  IndexSet all(sub.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  if (!all.empty()) {
    cert.tree = tb.build(all, rho);
    cert.constant = cert.tree.constant;
  }
  cert.diagonal_sum = cert.tree.diagonal;

  // Cross terms between different leaves, both orders: 2 |a||a'||J|.
  for (std::size_t i = 0; i < sub.size(); ++i)
    for (std::size_t j = i + 1; j < sub.size(); ++j) {
      if (tb.leaf_of[i] == tb.leaf_of[j]) continue;
      const double ai = std::abs(phi.coeff(sub.points[i]));
      const double aj = std::abs(phi.coeff(sub.points[j]));
      if (ai == 0.0 || aj == 0.0) continue;
      const JValue jv = j_integral_on(patch, frame, sub.points[i], sub.points[j]);
      const double m = 2.0 * ai * aj * std::abs(jv.direct);
      cert.offdiag.push_back({sub.points[i], sub.points[j], m});
      cert.offdiag_bound += m;
    }

  // Tail: |T| <= (#E l2)^{1/2} e^{-2 pi tau D} and |S| <= sum |a| on the patch.
  double short_l1 = 0.0;
  for (const auto& p : sub.points) short_l1 += std::abs(phi.coeff(p));
  if (ss.frequencies.size() < phi.support_size()) {
    const double tail = short_sum_tail_bound(phi.support_size(), patch.tau, cert.cutoff, phi.l2_mass());
    cert.tail_cross = 2.0 * mass * short_l1 * tail;
  }
  cert.offdiag_bound += cert.tail_cross;
  cert.verdict = cert.constant * cert.diagonal_sum - cert.offdiag_bound;
  return cert;
}

RealVec reflect(const RealVec& u, const RealVec& x) {
  check_unit(u, "reflect");
  if (u.size() != x.size()) throw ValidationError("reflect: dimension mismatch");
  const double c = 2.0 * dot(x, u);
  RealVec out(x);
  for (std::size_t i = 0; i < x.size(); ++i) out[i] -= c * u[i];
  return out;
}

bool in_reflected_set(const RealVec& u0, double delta, const RealVec& w, const RealVec& y, double tol) {
  RealVec diff(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) diff[i] = w[i] - y[i];
  const double n = norm(diff);
  if (n < 1e-12) {
    // y = w: any u orthogonal to w; the closest such u to u0 sits at |pi/2 - angle(u0, w)|.
    return std::abs(std::numbers::pi / 2 - vector_angle(u0, w)) <= delta + tol;
  }
  const double a = vector_angle(diff, u0);
  return std::min(a, std::numbers::pi - a) <= delta + tol;
}

EpsilonEstimate estimate_epsilon(int d, const RealVec& u0, double delta, const RealVec& w, int samples,
                                 int probes, std::uint64_t seed) {
  check_unit(u0, "estimate_epsilon");
  check_unit(w, "estimate_epsilon");
  if (static_cast<int>(u0.size()) != d || static_cast<int>(w.size()) != d) {
    throw ValidationError("estimate_epsilon: dimension mismatch");
  }
  if (!(delta > 0.0) || delta >= std::numbers::pi / 2) throw ValidationError("estimate_epsilon: delta must lie in (0, pi/2)");
  const auto us = sample_cap(Cap(u0, delta), samples, seed);
  RealVec mean(d, 0.0);
  for (const auto& u : us) {
    const RealVec r = reflect(u, w);
    for (int i = 0; i < d; ++i) mean[i] += r[i];
  }

  // Probe layout drawn once: tangent directions and area-uniform radial
  // fractions, a quarter of them on the boundary circle.
  std::mt19937_64 rng(seed + 1);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<RealVec> dirs(probes, RealVec(d));
  std::vector<double> fracs(probes);
  for (int k = 0; k < probes; ++k) {
    for (double& x : dirs[k]) x = gauss(rng);
    fracs[k] = k < probes / 4 ? 1.0 : unif(rng);
  }
  auto radius = [&](const RealVec& c, int n_probe, int iters) {
    RealVec perp(d, 0.0);
    if (d == 2) perp = {-c[1], c[0]};
    auto covered = [&](double eps) {
      const double one_minus = 1.0 - std::cos(eps);
      for (int k = 0; k < n_probe; ++k) {
        RealVec e = perp;
        double a;
        if (d == 2) {
          a = n_probe == 1 ? eps : eps * (2.0 * k / (n_probe - 1) - 1.0);
        } else {
          e = dirs[k];
          const double proj = dot(e, c);
          for (int i = 0; i < d; ++i) e[i] -= proj * c[i];
          const double en = norm(e);
          if (en < 1e-12) continue;
          for (double& x : e) x /= en;
          a = std::acos(std::clamp(1.0 - fracs[k] * one_minus, -1.0, 1.0));
        }
        RealVec y(d);
        for (int i = 0; i < d; ++i) y[i] = std::cos(a) * c[i] + std::sin(a) * e[i];
        if (!in_reflected_set(u0, delta, w, y)) return false;
      }
      return true;
    };
    if (!in_reflected_set(u0, delta, w, c) || !covered(1e-9)) return 0.0;
    double lo = 1e-9, hi = std::numbers::pi;
    for (int it = 0; it < iters; ++it) {
      const double mid = 0.5 * (lo + hi);
      (covered(mid) ? lo : hi) = mid;
    }
    return lo;
  };

  // The spherical mean is the natural center, but when the reflected set
  // pinches (w nearly orthogonal to u0) it can sit on the pinch; reflected
  // points from a coarse sub-sample of the cap compete with it.
  std::vector<RealVec> candidates;
  candidates.push_back(norm(mean) > 1e-12 ? normalized(mean) : reflect(u0, w));
  if (d > 2) {
    for (const auto& u : sample_cap(Cap(u0, delta), 48, seed + 2)) candidates.push_back(reflect(u, w));
    for (const auto& u : sample_cap(Cap(u0, 0.5 * delta), 16, seed + 3)) candidates.push_back(reflect(u, w));
  }
  std::size_t best = 0;
  double best_r = -1.0;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const double r = candidates.size() == 1 ? 0.0 : radius(candidates[i], std::min(probes, 200), 20);
    if (r > best_r) {
      best_r = r;
      best = i;
    }
  }
  EpsilonEstimate out;
  out.w1 = candidates[best];
  out.epsilon = radius(out.w1, probes, 40);
  return out;
}

double epsilon_d(int d, double delta, int n_w, std::uint64_t seed) {
  if (d < 2) throw ValidationError("epsilon_d: d must be at least 2");
  RealVec e1(d, 0.0), e2(d, 0.0);
  e1[0] = 1.0;
  e2[1] = 1.0;
  std::vector<RealVec> ws{e1, e2};
  for (auto& w : sample_sphere(d, n_w, seed)) ws.push_back(std::move(w));
  double best = std::numeric_limits<double>::infinity();
  for (const auto& w : ws) best = std::min(best, estimate_epsilon(d, e1, delta, w, 4000, 2000, seed).epsilon);
  return best;
}

CapPropagation cap_propagate(const Cap& omega0, const RealVec& u0, double delta1, double delta0,
                             int max_iterations, int probes, std::uint64_t seed) {
  const int d = omega0.dim();
  check_unit(u0, "cap_propagate");
  if (static_cast<int>(u0.size()) != d) throw ValidationError("cap_propagate: dimension mismatch");
  if (!(delta1 > 0.0) || delta1 >= std::numbers::pi) throw ValidationError("cap_propagate: delta1 must lie in (0, pi)");
  if (!(delta0 > 0.0)) throw ValidationError("cap_propagate: delta0 must be positive");
  CapPropagation out;
  const double half = delta1 / 2.0;
  out.epsilon_d = epsilon_d(d, half);
  if (!(delta0 < half)) throw PreconditionViolated("cap_propagate: delta0 must be below delta1 / 2");
  if (!(6.0 * delta0 < out.epsilon_d)) {
    throw PreconditionViolated("cap_propagate: delta0 must be below epsilon_d(delta1/2)/6; measured epsilon_d = " +
                               std::to_string(out.epsilon_d));
  }
  if (!(omega0.angle > 5.0 * delta0)) throw PreconditionViolated("cap_propagate: theta0 must exceed 5 delta0");
  if (max_iterations <= 0) max_iterations = static_cast<int>(std::ceil(std::numbers::pi / delta0));

  out.steps.push_back({omega0, 0.0, 0, 0});
  Cap cur = omega0;
  while (cur.angle < std::numbers::pi && out.iterations < max_iterations) {
    const auto est = estimate_epsilon(d, u0, half, cur.center, 4000, 2000, seed);
    const double theta = std::min(std::numbers::pi, cur.angle + delta0);
    Cap next(est.w1, theta);
    CapStep step{next, est.epsilon, probes, 0};
    // Each probe y is covered by the reflected cap centered at the point p
    // on the arc from w1 towards y at distance min(angle, 6 delta0); p must
    // itself be a reflected center, which holds when eps >= 6 delta0.
    const double reach = cur.angle - 5.0 * delta0;
    const double step_out = std::min(est.epsilon, 6.0 * delta0);
    for (const auto& y : sample_cap(next, probes, seed + 7 + out.iterations)) {
      const double a = vector_angle(next.center, y);
      RealVec p = next.center;
      if (a > 1e-14) {
        RealVec dir = y;
        if (a > std::numbers::pi - 1e-9) {
          dir.assign(d, 0.0);
          dir[std::abs(next.center[0]) < 0.9 ? 0 : 1] = 1.0;
        }
        p = rotate_towards(next.center, dir, std::min(step_out, a));
      }
      const bool ok = in_reflected_set(u0, half, cur.center, p, 1e-9) && vector_angle(p, y) <= reach + 1e-9;
      if (!ok) ++step.probe_failures;
    }
    out.steps.push_back(step);
    cur = next;
    ++out.iterations;
  }
  out.full_sphere = cur.angle >= std::numbers::pi;
  return out;
}

}  // namespace toral
