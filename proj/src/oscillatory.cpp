#include "toral/oscillatory.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numbers>
#include <set>
#include <sstream>

#include "toral/errors.hpp"
#include "toral/parallel.hpp"
#include "toral/quadrature.hpp"

namespace toral {

namespace {

double lattice_dot(const LatticePoint& xi, const RealVec& x) {
  double s = 0.0;
  for (std::size_t i = 0; i < xi.dim(); ++i) s += static_cast<double>(xi[i]) * x[i];
  return s;
}

double cap_bump(double s) {
  if (std::abs(s) >= 1.0) return 0.0;
  return std::exp(-1.0 / (1.0 - s * s));
}

}  // namespace

void check_frame(const ComplexPatch& patch, const ShiftFrame& frame) {
  if (patch.v.size() != frame.v0.size()) throw MismatchedFrame("patch and frame dimensions differ");
  double diff = 0.0;
  for (std::size_t i = 0; i < patch.v.size(); ++i) diff = std::max(diff, std::abs(patch.v[i] - frame.v0[i]));
  if (diff > 1e-9) throw MismatchedFrame("patch direction v differs from -xi0/|xi0|");
}

JValue j_integral_on(const ComplexPatch& patch, const ShiftFrame& frame, const LatticePoint& xi,
                     const LatticePoint& xi_prime) {
  check_frame(patch, frame);
  const double a = shift_height(frame, xi);
  const double ap = shift_height(frame, xi_prime);
  const LatticePoint e = xi - frame.xi0;
  const LatticePoint ep = xi_prime - frame.xi0;
  const LatticePoint delta = xi - xi_prime;
  JValue out;
  RealVec im(patch.d());
  for (const auto& n : patch.nodes) {
    if (n.weight == 0.0) continue;
    for (int i = 0; i < patch.d(); ++i) im[i] = n.z[i].imag();
    const cplx e1 = unit_phase(lattice_dot(e, n.g)) * std::exp(-kTwoPi * lattice_dot(e, im));
    const cplx e2 = unit_phase(-lattice_dot(ep, n.g)) * std::exp(-kTwoPi * lattice_dot(ep, im));
    out.direct += n.weight * e1 * e2;
    const double amp = n.weight * std::exp(-kTwoPi * n.t * (a + ap));
    out.factored += amp * unit_phase(lattice_dot(delta, n.g));
    out.l1 += std::abs(amp);
  }
  const double scale = std::max({std::abs(out.direct), std::abs(out.factored), 1e-300});
  out.relative_difference = std::abs(out.direct - out.factored) / scale;
  return out;
}

PatchFamily::PatchFamily(ComplexPatch base, int max_order)
    : base_(std::move(base)), max_order_(max_order), diam_(base_.phase_diameter()) {
  if (max_order_ <= 0) max_order_ = base_.d() == 2 ? 2000 : 200;
}

const ComplexPatch& PatchFamily::at(int order) {
  const bool flat_x = base_.d() == 2;
  if (base_.options.n_t == order && (flat_x || base_.options.n_x == order)) return base_;
  std::lock_guard<std::mutex> lock(mu_);
  auto& slot = cache_[order];
  if (!slot) slot = std::make_unique<ComplexPatch>(rebuild_patch(base_, order, flat_x ? 2 : order));
  return *slot;
}

int PatchFamily::order_for(double separation) const {
  const int n = std::max(20, 6 * static_cast<int>(std::ceil(separation * diam_)));
  return std::min(n, max_order_);
}

int PatchFamily::refined(int order) const {
  return static_cast<int>(std::ceil(1.5 * order));
}

OscillatoryResult j_integral(PatchFamily& family, const ShiftFrame& frame, const LatticePoint& xi,
                             const LatticePoint& xi_prime, double tol) {
  OscillatoryResult r;
  r.xi = xi;
  r.xi_prime = xi_prime;
  r.separation = std::sqrt(static_cast<double>(distance2(xi, xi_prime)));
  int order = family.order_for(r.separation);
  JValue coarse = j_integral_on(family.at(order), frame, xi, xi_prime);
  while (true) {
    const int next = family.refined(order);
    const JValue fine = j_integral_on(family.at(next), frame, xi, xi_prime);
    r.order = order;
    r.refined_order = next;
    r.value = fine.direct;
    r.coarse_value = coarse.direct;
    r.factored_value = fine.factored;
    r.identity_error = std::max(coarse.relative_difference, fine.relative_difference);
    r.refinement_error = std::abs(fine.direct - coarse.direct);
    r.l1 = fine.l1;
    if (r.refinement_error <= tol * r.l1 || next >= family.max_order()) break;
    order = next;
    coarse = fine;
  }
  return r;
}

double phase_gradient_min(const ComplexPatch& patch, const RealVec& u) {
  if (u.size() != static_cast<std::size_t>(patch.d()) || std::abs(norm(u) - 1.0) > 1e-9) {
    throw ValidationError("phase_gradient_min: u must be a unit vector in R^d");
  }
  double best = std::numeric_limits<double>::infinity();
  for (const auto& n : patch.nodes) {
    if (n.weight <= 0.0) continue;
    double s = 0.0;
    for (const auto& col : n.dg) {
      const double c = dot(col, u);
      s += c * c;
    }
    best = std::min(best, std::sqrt(s));
  }
  return best;
}

std::string DecayFit::csv() const {
  std::ostringstream os;
  os << "separation,|J|,refinement_error\n" << std::setprecision(17);
  for (const auto& r : rows) os << r.separation << "," << r.magnitude << "," << r.refinement_error << "\n";
  return os.str();
}

std::vector<std::pair<std::size_t, std::size_t>> DecayFit::monotonicity_violations(double floor) const {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows.size(); ++j) {
      if (!(rows[j].separation > rows[i].separation)) continue;
      const double slack = rows[i].refinement_error + rows[j].refinement_error + floor;
      if (rows[j].magnitude > rows[i].magnitude + slack) out.emplace_back(i, j);
    }
  return out;
}

DecayFit decay_fit(PatchFamily& family, const ShiftFrame& frame,
                   const std::vector<std::pair<LatticePoint, LatticePoint>>& pairs) {
  std::set<std::pair<LatticePoint, LatticePoint>> seen;
  std::set<std::int64_t> separations;
  for (const auto& [a, b] : pairs) {
    if (a == b) throw ValidationError("decay_fit: pairs must have xi != xi'");
    if (!seen.insert({a, b}).second) throw ValidationError("decay_fit: duplicate pair");
    separations.insert(distance2(a, b));
  }
  if (separations.size() < 3) throw DegenerateFit("decay_fit: fewer than three distinct separations");
  const double lo = std::sqrt(static_cast<double>(*separations.begin()));
  const double hi = std::sqrt(static_cast<double>(*separations.rbegin()));
  if (hi < 4.0 * lo) throw ValidationError("decay_fit: separations must span a factor of 4");

  DecayFit fit;
  for (const auto& [a, b] : pairs) {
    const OscillatoryResult r = j_integral(family, frame, a, b);
    fit.rows.push_back(DecayRow{a, b, r.separation, std::abs(r.value), r.refinement_error});
  }
  std::stable_sort(fit.rows.begin(), fit.rows.end(),
                   [](const DecayRow& x, const DecayRow& y) { return x.separation < y.separation; });
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(fit.rows.size());
  for (const auto& r : fit.rows) {
    const double x = std::log(r.separation);
    const double y = std::log(std::max(r.magnitude, 1e-300));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double den = n * sxx - sx * sx;
  if (!(den > 0.0)) throw DegenerateFit("decay_fit: separations do not vary");
  fit.slope = (n * sxy - sx * sy) / den;
  fit.intercept = (sy - fit.slope * sx) / n;
  return fit;
}

double SurfaceMeasure::density(const RealVec& x) const {
  if (!surface.in_domain(x)) return 0.0;
  const RealVec nrm = unit_normal(surface, x);
  const double b = cap_bump(vector_angle(nrm, u) / delta0);
  if (b == 0.0) return 0.0;
  const RealVec g = surface.gradient(x);
  return b * std::sqrt(1.0 + dot(g, g));
}

SurfaceMeasure make_surface_measure(const AnalyticGraph& s, const RealVec& u, double delta0) {
  const int m = s.params();
  if (u.size() != static_cast<std::size_t>(s.d) || std::abs(norm(u) - 1.0) > 1e-9) {
    throw ValidationError("surface measure: u must be a unit vector in R^d");
  }
  if (!(delta0 > 0.0) || delta0 >= std::numbers::pi / 4) {
    throw ValidationError("surface measure: delta0 must lie in (0, pi/4)");
  }
  if (!(u.back() > 0.0)) throw PreconditionViolated("surface measure: graph normals have positive last coordinate");
  SurfaceMeasure mu;
  mu.surface = s;
  mu.u = u;
  mu.delta0 = delta0;

  // Newton for grad f(x) = -u_hat / u_d.
  RealVec target(m);
  for (int i = 0; i < m; ++i) target[i] = -u[i] / u.back();
  RealVec x(m, 0.0);
  bool ok = false;
  for (int it = 0; it < 100; ++it) {
    const RealVec g = s.gradient(x);
    Eigen::VectorXd r(m);
    for (int i = 0; i < m; ++i) r(i) = g[i] - target[i];
    if (r.norm() < 1e-13) {
      ok = true;
      break;
    }
    const Eigen::VectorXd step = s.hessian(x).fullPivLu().solve(r);
    if (!step.allFinite()) break;
    for (int i = 0; i < m; ++i) x[i] -= step(i);
    if (norm(x) > 10.0 * s.delta) break;
  }
  if (!ok || !s.in_domain(x)) throw PreconditionViolated("surface measure: no parameter point with normal u in the domain");
  mu.center = x;

  // Radial extent of the support along a fan of directions.
  std::vector<RealVec> fan;
  if (m == 1) {
    fan = {{1.0}, {-1.0}};
  } else if (m == 2) {
    for (int k = 0; k < 64; ++k) fan.push_back({std::cos(kTwoPi * k / 64), std::sin(kTwoPi * k / 64)});
  } else {
    fan = sample_sphere(m, 256, 7);
  }
  mu.half_widths.assign(m, 0.0);
  const double dr = s.delta / 400.0;
  for (const auto& e : fan) {
    auto angle_at = [&](double r) {
      RealVec p(m);
      for (int i = 0; i < m; ++i) p[i] = x[i] + r * e[i];
      if (!s.in_domain(p)) throw PreconditionViolated("surface measure: normal cap support leaves the domain");
      return vector_angle(unit_normal(s, p), u);
    };
    double lo = 0.0, hi = dr;
    while (angle_at(hi) < delta0) {
      lo = hi;
      hi += dr;
    }
    for (int it = 0; it < 60; ++it) {
      const double mid = 0.5 * (lo + hi);
      (angle_at(mid) < delta0 ? lo : hi) = mid;
    }
    for (int i = 0; i < m; ++i) mu.half_widths[i] = std::max(mu.half_widths[i], 1.05 * hi * std::abs(e[i]));
  }
  for (int i = 0; i < m; ++i) mu.half_widths[i] = std::max(mu.half_widths[i], 1e-9);

  // Injectivity of the Gauss map on the support: no fold (Hessian
  // determinant keeps one sign) and no colliding normals on a coarse grid.
  const int coarse = m == 1 ? 200 : (m == 2 ? 40 : 12);
  std::vector<RealVec> pts, normals;
  std::vector<int> idx(m, 0);
  int sign = 0;
  while (true) {
    RealVec p(m);
    for (int i = 0; i < m; ++i) p[i] = x[i] + mu.half_widths[i] * (2.0 * (idx[i] + 0.5) / coarse - 1.0);
    if (s.in_domain(p)) {
      const RealVec nrm = unit_normal(s, p);
      if (vector_angle(nrm, u) < delta0) {
        const double det = s.hessian(p).determinant();
        const int sg = det > 0 ? 1 : (det < 0 ? -1 : 0);
        if (sg == 0 || (sign != 0 && sg != sign)) {
          throw GaussMapNotInjective("surface measure: Gauss map folds on the support (D^2 f degenerates)");
        }
        sign = sg;
        pts.push_back(p);
        normals.push_back(nrm);
      }
    }
    int a = m - 1;
    while (a >= 0 && ++idx[a] == coarse) idx[a--] = 0;
    if (a < 0) break;
  }
  double cell = 0.0;
  for (int i = 0; i < m; ++i) cell = std::max(cell, 2.0 * mu.half_widths[i] / coarse);
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      RealVec dp(m);
      for (int a = 0; a < m; ++a) dp[a] = pts[i][a] - pts[j][a];
      if (norm(dp) > 0.5 * cell && vector_angle(normals[i], normals[j]) < 1e-6) {
        throw GaussMapNotInjective("surface measure: distinct parameters share a normal");
      }
    }
  mu.mass = surface_measure_ft(mu, RealVec(s.d, 0.0)).real();
  return mu;
}

cplx surface_measure_ft(const SurfaceMeasure& mu, const RealVec& y, int order) {
  const AnalyticGraph& s = mu.surface;
  const int m = s.params();
  if (y.size() != static_cast<std::size_t>(s.d)) throw ValidationError("surface_measure_ft: y has wrong dimension");
  if (order <= 0) {
    double diag = 0.0;
    for (double h : mu.half_widths) diag += 4.0 * h * h;
    diag = std::sqrt(diag);
    const int cap = m == 1 ? 4000 : (m == 2 ? 600 : 60);
    order = std::min(cap, 96 + static_cast<int>(std::ceil(4.0 * norm(y) * diag)));
  }
  std::vector<GaussRule> rules;
  for (int i = 0; i < m; ++i) {
    rules.push_back(gauss_legendre(order, mu.center[i] - mu.half_widths[i], mu.center[i] + mu.half_widths[i]));
  }
  // Partial sums per first-axis node, reduced in index order.
  std::vector<cplx> partial(order);
  parallel_for(order, [&](std::size_t i0) {
    cplx acc{};
    std::vector<int> idx(m, 0);
    idx[0] = static_cast<int>(i0);
    while (true) {
      RealVec x(m);
      double w = 1.0;
      for (int a = 0; a < m; ++a) {
        x[a] = rules[a].nodes[idx[a]];
        w *= rules[a].weights[idx[a]];
      }
      const double dens = mu.density(x);
      if (dens != 0.0) {
        double ph = s.value(x) * y.back();
        for (int a = 0; a < m; ++a) ph += x[a] * y[a];
        acc += w * dens * unit_phase(-ph);
      }
      int a = m - 1;
      while (a >= 1 && ++idx[a] == order) idx[a--] = 0;
      if (a < 1) break;
    }
    partial[i0] = acc;
  });
  cplx total{};
  for (const auto& p : partial) total += p;
  return total;
}

cplx surface_measure_ft(const AnalyticGraph& s, const RealVec& u, double delta0, const RealVec& y) {
  return surface_measure_ft(make_surface_measure(s, u, delta0), y);
}

DecayReport nonstationary_decay_check(const AnalyticGraph& s, const RealVec& u, double delta0,
                                      const std::vector<RealVec>& rays,
                                      const std::vector<double>& radii) {
  if (radii.size() < 2) throw ValidationError("nonstationary_decay_check: need at least two radii");
  for (std::size_t i = 0; i + 1 < radii.size(); ++i)
    if (!(radii[i] > 0.0) || !(radii[i + 1] > radii[i])) throw ValidationError("nonstationary_decay_check: radii must increase");
  RealVec minus_u(u);
  for (double& c : minus_u) c = -c;
  for (const auto& r : rays) {
    if (std::abs(norm(r) - 1.0) > 1e-9) throw ValidationError("nonstationary_decay_check: rays must be unit vectors");
    // mu_hat(-y) = conj mu_hat(y), so the antipodal cap is excluded too.
    if (vector_angle(r, u) <= 2.0 * delta0 || vector_angle(r, minus_u) <= 2.0 * delta0) {
      throw PreconditionViolated("nonstationary_decay_check: ray inside Cap(+-u, 2 delta0)");
    }
  }
  const SurfaceMeasure mu = make_surface_measure(s, u, delta0);
  DecayReport rep;
  rep.floor = 1e-11 * mu.mass;
  rep.all_passed = true;
  for (const auto& ray : rays) {
    RayDecay rd;
    rd.ray = ray;
    rd.radii = radii;
    for (double r : radii) {
      RealVec y(ray);
      for (double& c : y) c *= r;
      rd.magnitudes.push_back(std::abs(surface_measure_ft(mu, y)));
    }
    std::size_t first = radii.size() - 1;
    for (std::size_t i = radii.size() - 1; i-- > 0;) {
      const bool halved = rd.magnitudes[i + 1] <= 0.5 * rd.magnitudes[i] || rd.magnitudes[i + 1] < rep.floor;
      if (!halved) break;
      first = i;
    }
    rd.passed = first + 1 < radii.size();
    rd.threshold = rd.passed ? radii[first] : std::numeric_limits<double>::infinity();
    rep.all_passed = rep.all_passed && rd.passed;
    rep.rays.push_back(std::move(rd));
  }
  return rep;
}

}  // namespace toral
