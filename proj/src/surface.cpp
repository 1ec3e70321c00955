#include "toral/surface.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "toral/errors.hpp"
#include "toral/parallel.hpp"
#include "toral/quadrature.hpp"

namespace toral {

namespace {

struct Direction {
  RealVec omega;
  double wd = 0.0;
};

Direction split_direction(const AnalyticGraph& s, const RealVec& v) {
  if (v.size() != static_cast<std::size_t>(s.d)) {
    throw ValidationError("direction v must have the ambient dimension");
  }
  if (std::abs(norm(v) - 1.0) > 1e-9) throw ValidationError("direction v must be a unit vector");
  return Direction{RealVec(v.begin(), v.end() - 1), v.back()};
}

void check_point(const AnalyticGraph& s, const RealVec& x) {
  if (x.size() != static_cast<std::size_t>(s.params())) {
    throw ValidationError("parameter point has the wrong dimension");
  }
  if (!s.in_domain(x)) throw ValidationError("parameter point outside |x| < delta");
}

Eigen::MatrixXd hess_matrix(const Jet<double>& j) {
  const auto m = static_cast<Eigen::Index>(j.grad.size());
  Eigen::MatrixXd h(m, m);
  for (Eigen::Index a = 0; a < m; ++a)
    for (Eigen::Index b = 0; b < m; ++b) h(a, b) = j.h(a, b);
  return h;
}

double quad_form(const Eigen::MatrixXd& h, const RealVec& w) {
  double s = 0.0;
  for (Eigen::Index a = 0; a < h.rows(); ++a)
    for (Eigen::Index b = 0; b < h.cols(); ++b) s += w[a] * h(a, b) * w[b];
  return s;
}

double bump_profile(double s, double k) {
  if (std::abs(s) >= 1.0) return 0.0;
  return std::exp(-k / (1.0 - s * s));
}

RealVec random_in_ball(int m, double radius, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  RealVec x(m);
  double n = 0.0;
  do {
    for (double& c : x) c = g(rng);
    n = norm(x);
  } while (n < 1e-12);
  const double r = radius * std::pow(u(rng), 1.0 / m);
  for (double& c : x) c *= r / n;
  return x;
}

}  // namespace

AnalyticGraph::AnalyticGraph(int d_, Expr f_, double delta_) : d(d_), f(std::move(f_)), delta(delta_) {
  if (d < 2) throw ValidationError("AnalyticGraph: ambient dimension must be >= 2");
  if (!(delta > 0.0)) throw ValidationError("AnalyticGraph: domain radius must be positive");
  if (f.arity() > d - 1) {
    throw ValidationError("AnalyticGraph: f uses x" + std::to_string(f.arity()) + " but only " +
                          std::to_string(d - 1) + " parameters exist");
  }
}

AnalyticGraph AnalyticGraph::parse(int d, const std::string& text, double delta) {
  return AnalyticGraph(d, parse_expr(text), delta);
}

bool AnalyticGraph::in_domain(const RealVec& x) const { return norm(x) < delta; }

RealVec AnalyticGraph::gradient(const RealVec& x) const { return f.jet(x).grad; }

Eigen::MatrixXd AnalyticGraph::hessian(const RealVec& x) const { return hess_matrix(f.jet(x)); }

RealVec unit_normal(const AnalyticGraph& s, const RealVec& x) {
  check_point(s, x);
  const RealVec g = s.gradient(x);
  const double w = std::sqrt(1.0 + dot(g, g));
  RealVec n(s.d);
  for (int i = 0; i < s.params(); ++i) n[i] = -g[i] / w;
  n.back() = 1.0 / w;
  return n;
}

CurvatureData curvature_data(const AnalyticGraph& s, const RealVec& x) {
  check_point(s, x);
  const Jet<double> j = s.f.jet(x);
  const auto m = static_cast<Eigen::Index>(s.params());
  Eigen::VectorXd g(m);
  for (Eigen::Index i = 0; i < m; ++i) g(i) = j.grad[i];
  const double w = std::sqrt(1.0 + g.squaredNorm());
  if (1.0 + g.squaredNorm() > 1e12) {
    throw NumericalError("curvature_data: first fundamental form condition number exceeds 1e12");
  }
  CurvatureData c;
  c.normal = unit_normal(s, x);
  c.first_form = Eigen::MatrixXd::Identity(m, m) + g * g.transpose();
  c.second_form = hess_matrix(j) / w;
  c.shape = c.first_form.ldlt().solve(c.second_form);
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(c.second_form, c.first_form);
  if (es.info() != Eigen::Success) throw NumericalError("curvature_data: eigen solver failed");
  c.principal_curvatures.assign(es.eigenvalues().data(), es.eigenvalues().data() + m);
  c.gauss_kronecker = c.second_form.determinant() / c.first_form.determinant();
  return c;
}

double normal_curvature(const AnalyticGraph& s, const RealVec& x, const RealVec& omega) {
  check_point(s, x);
  if (omega.size() != static_cast<std::size_t>(s.params()) || !(norm(omega) > 0.0)) {
    throw ValidationError("normal_curvature: omega must be a nonzero tangent parameter vector");
  }
  const Jet<double> j = s.f.jet(x);
  const double gw = dot(j.grad, omega);
  const double w = std::sqrt(1.0 + dot(j.grad, j.grad));
  return quad_form(hess_matrix(j), omega) / (w * (dot(omega, omega) + gw * gw));
}

bool is_asymptotic(const AnalyticGraph& s, const RealVec& x, const RealVec& omega, double tol) {
  check_point(s, x);
  return std::abs(quad_form(s.hessian(x), omega)) <= tol * dot(omega, omega);
}

std::optional<RealVec> tangency_point(const AnalyticGraph& s, const RealVec& v,
                                      const RealVec& start) {
  const Direction dir = split_direction(s, v);
  RealVec x = start;
  auto residual = [&](const Jet<double>& j) { return dot(j.grad, dir.omega) - dir.wd; };
  Jet<double> j = s.f.jet(x);
  double r = residual(j);
  for (int it = 0; it < 100; ++it) {
    const double scale = std::max(1.0, std::abs(dir.wd));
    if (std::abs(r) < 1e-13 * scale) return s.in_domain(x) ? std::optional<RealVec>(x) : std::nullopt;
    RealVec dg(x.size(), 0.0);
    for (std::size_t a = 0; a < x.size(); ++a)
      for (std::size_t b = 0; b < x.size(); ++b) dg[a] += j.h(a, b) * dir.omega[b];
    const double n2 = dot(dg, dg);
    if (!(n2 > 1e-300)) return std::nullopt;
    double step = 1.0;
    bool improved = false;
    for (int halve = 0; halve < 40; ++halve, step *= 0.5) {
      RealVec trial = x;
      for (std::size_t a = 0; a < x.size(); ++a) trial[a] -= step * r / n2 * dg[a];
      const Jet<double> jt = s.f.jet(trial);
      const double rt = residual(jt);
      if (std::abs(rt) < std::abs(r)) {
        x = std::move(trial);
        j = jt;
        r = rt;
        improved = true;
        break;
      }
    }
    if (!improved || norm(x) > 10.0 * s.delta) return std::nullopt;
  }
  return std::nullopt;
}

AdmissibleCap find_admissible_cap(const AnalyticGraph& s, const AdmissibleCapOptions& opt) {
  const int m = s.params();
  std::mt19937_64 rng(opt.seed);
  std::vector<RealVec> xs{RealVec(m, 0.0)};
  for (int i = 0; i < opt.hessian_samples; ++i) xs.push_back(random_in_ball(m, opt.sample_radius * s.delta, rng));
  std::vector<Eigen::MatrixXd> hs;
  double biggest = 0.0;
  for (const auto& x : xs) {
    hs.push_back(s.hessian(x));
    biggest = std::max(biggest, hs.back().cwiseAbs().maxCoeff());
  }
  if (biggest <= opt.flat_tolerance) throw FlatSurface("find_admissible_cap: all sampled Hessians vanish");

  std::vector<RealVec> candidates;
  if (m == 1) {
    candidates.push_back({1.0});
  } else if (m == 2) {
    for (int k = 0; k < opt.candidate_directions; ++k) {
      const double a = std::numbers::pi * k / opt.candidate_directions;
      candidates.push_back({std::cos(a), std::sin(a)});
    }
  } else {
    candidates = sample_sphere(m, opt.candidate_directions, opt.seed + 1);
  }
  AdmissibleCap out;
  for (const auto& w : candidates) {
    double floor = std::numeric_limits<double>::infinity();
    for (const auto& h : hs) floor = std::min(floor, std::abs(quad_form(h, w)));
    if (floor > out.curvature_floor) {
      out.curvature_floor = floor;
      out.omega_star = w;
    }
  }
  if (out.curvature_floor <= opt.flat_tolerance) {
    throw CapNotFound("find_admissible_cap: every sampled direction is asymptotic somewhere");
  }
  out.curvature_bound = 0.5 * out.curvature_floor;

  const RealVec origin(m, 0.0);
  const double slope = dot(s.gradient(origin), out.omega_star);
  RealVec center(out.omega_star);
  center.push_back(slope);
  const double cn = norm(center);
  for (double& c : center) c /= cn;

  // Every test direction needs a witness inside the domain with curvature
  // above the bound; the check runs on a 10% wider cap as margin.
  auto witnesses_for = [&](const Cap& cap, AdmissibleCap* record) {
    for (const auto& v : sample_cap(cap, opt.test_directions, opt.seed + 2)) {
      const RealVec w(v.begin(), v.end() - 1);
      const double wn = norm(w);
      if (!(wn > 1e-12)) return false;
      auto x = tangency_point(s, v, origin);
      if (!x || norm(*x) >= opt.witness_radius * s.delta) return false;
      const double curv = std::abs(quad_form(s.hessian(*x), w)) / (wn * wn);
      if (curv < out.curvature_bound) return false;
      if (record) {
        record->directions.push_back(v);
        record->witnesses.push_back(*x);
        record->residuals.push_back(std::abs(dot(s.gradient(*x), w) - v.back()));
        record->curvatures.push_back(curv);
      }
    }
    return true;
  };
  for (double theta = std::numbers::pi / 4; theta >= opt.min_angle; theta *= 0.5) {
    if (!witnesses_for(Cap(center, std::min(std::numbers::pi, 1.1 * theta)), nullptr)) continue;
    out.cap = Cap(center, theta);
    if (witnesses_for(out.cap, &out)) return out;
    out.directions.clear();
    out.witnesses.clear();
    out.residuals.clear();
    out.curvatures.clear();
  }
  throw CapNotFound("find_admissible_cap: no cap of angle >= " + std::to_string(opt.min_angle));
}

double h_eval(const AnalyticGraph& s, const RealVec& v, const RealVec& x, double t) {
  const Direction dir = split_direction(s, v);
  if (x.size() != static_cast<std::size_t>(s.params())) throw ValidationError("h_eval: bad x");
  if (t == 0.0) return dot(s.gradient(x), dir.omega) - dir.wd;
  ComplexVec z(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) z[i] = cplx(x[i], t * dir.omega[i]);
  return s.value(z).imag() / t - dir.wd;
}

HGradient h_gradient(const AnalyticGraph& s, const RealVec& v, const RealVec& x, double t_probe,
                     double step) {
  const Direction dir = split_direction(s, v);
  check_point(s, x);
  if (std::abs(h_eval(s, v, x, 0.0)) > 1e-8) {
    throw PreconditionViolated("h_gradient: x is not a tangency point (|h(x,0)| > 1e-8)");
  }
  HGradient out;
  const Eigen::MatrixXd h = s.hessian(x);
  out.analytic.assign(x.size(), 0.0);
  for (std::size_t a = 0; a < x.size(); ++a)
    for (std::size_t b = 0; b < x.size(); ++b) out.analytic[a] += h(a, b) * dir.omega[b];
  out.finite_diff.resize(x.size());
  for (std::size_t a = 0; a < x.size(); ++a) {
    RealVec xp = x, xm = x;
    xp[a] += step;
    xm[a] -= step;
    out.finite_diff[a] = (h_eval(s, v, xp, t_probe) - h_eval(s, v, xm, t_probe)) / (2.0 * step);
    out.max_discrepancy = std::max(out.max_discrepancy, std::abs(out.finite_diff[a] - out.analytic[a]));
  }
  out.dh_dt = (h_eval(s, v, x, t_probe) - h_eval(s, v, x, -t_probe)) / (2.0 * t_probe);
  return out;
}

double BumpSpec::value(double t, const RealVec& xhat) const {
  double v = bump_profile((t - t_center) / t_radius, exponent);
  if (v == 0.0 || xhat.empty()) return v;
  double r2 = 0.0;
  for (std::size_t i = 0; i < xhat.size(); ++i) r2 += (xhat[i] - x_center[i]) * (xhat[i] - x_center[i]);
  return v * bump_profile(std::sqrt(r2) / x_radius, exponent);
}

double ComplexPatch::mass() const {
  double s = 0.0;
  for (const auto& n : nodes) s += n.weight;
  return s;
}

double ComplexPatch::max_defining_residual() const {
  double worst = 0.0;
  for (const auto& n : nodes)
    for (std::size_t i = 0; i < n.z.size(); ++i) worst = std::max(worst, std::abs(n.z[i].imag() - n.t * v[i]));
  return worst;
}

double ComplexPatch::phase_diameter() const {
  if (nodes.empty()) return 0.0;
  RealVec lo(d(), std::numeric_limits<double>::infinity()), hi(d(), -std::numeric_limits<double>::infinity());
  for (const auto& n : nodes) {
    if (n.weight <= 0.0) continue;
    for (int i = 0; i < d(); ++i) {
      lo[i] = std::min(lo[i], n.g[i]);
      hi[i] = std::max(hi[i], n.g[i]);
    }
  }
  double s = 0.0;
  for (int i = 0; i < d(); ++i)
    if (hi[i] >= lo[i]) s += (hi[i] - lo[i]) * (hi[i] - lo[i]);
  return std::sqrt(s);
}

namespace {

struct PatchSolver {
  const AnalyticGraph& s;
  Direction dir;
  int k;
  bool degenerate;

  RealVec assemble(double xk, const RealVec& xhat) const {
    RealVec x(s.params());
    for (int i = 0, j = 0; i < s.params(); ++i) x[i] = i == k ? xk : xhat[j++];
    return x;
  }

  ComplexVec lift(const RealVec& x, double t) const {
    ComplexVec z(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) z[i] = cplx(x[i], t * dir.omega[i]);
    return z;
  }

  // h and dh/dx_k at (x, t), with the t = 0 limit handled exactly.
  std::pair<double, double> h_and_slope(const RealVec& x, double t) const {
    if (t == 0.0) {
      const Jet<double> j = s.f.jet(x);
      double dk = 0.0;
      for (int b = 0; b < s.params(); ++b) dk += j.h(k, b) * dir.omega[b];
      return {dot(j.grad, dir.omega) - dir.wd, dk};
    }
    const Jet<cplx> j = s.f.jet(lift(x, t));
    return {j.value.imag() / t - dir.wd, j.grad[k].imag() / t};
  }

  double solve(double xk, const RealVec& xhat, double t) const {
    RealVec x = assemble(xk, xhat);
    auto [h, slope] = h_and_slope(x, t);
    const double tol = 1e-12 * std::max(1.0, std::abs(dir.wd));
    for (int it = 0; it < 50; ++it) {
      if (std::abs(h) < tol) return x[k];
      if (!(std::abs(slope) > 0.0)) break;
      double step = 1.0;
      bool moved = false;
      for (int halve = 0; halve < 30; ++halve, step *= 0.5) {
        RealVec trial = x;
        trial[k] -= step * h / slope;
        auto [ht, st] = h_and_slope(trial, t);
        if (std::abs(ht) < std::abs(h)) {
          x = std::move(trial);
          h = ht;
          slope = st;
          moved = true;
          break;
        }
      }
      if (!moved) break;
    }
    if (std::abs(h) < tol) return x[k];
    std::ostringstream os;
    os << "build_patch: Newton did not reach |h| < 1e-12 at t=" << t << " xhat=(";
    for (std::size_t i = 0; i < xhat.size(); ++i) os << (i ? "," : "") << xhat[i];
    os << ") residual " << std::abs(h);
    throw NewtonDivergence(os.str());
  }

  PatchNode node(double xk, const RealVec& xhat, double t) const {
    PatchNode n;
    n.t = t;
    n.xhat = xhat;
    n.x = assemble(xk, xhat);
    const ComplexVec zx = lift(n.x, t);
    const Jet<cplx> j = s.f.jet(zx);
    n.z = zx;
    n.z.push_back(j.value);
    n.g.resize(s.d);
    for (int i = 0; i < s.d; ++i) n.g[i] = n.z[i].real();

    cplx grad_omega{};
    for (int i = 0; i < s.params(); ++i) grad_omega += j.grad[i] * dir.omega[i];
    n.stationary_r1 = grad_omega.real() - dir.wd;
    n.stationary_r2 = -grad_omega.imag();

    // Implicit derivatives of x_k(t, xhat) from h = Im F / t - w_d = 0.
    double dk_dt = 0.0;
    RealVec dk_dx(xhat.size(), 0.0);
    if (!degenerate) {
      const double hk = j.grad[k].imag() / t;
      const double ht = (grad_omega.real() * t - j.value.imag()) / (t * t);
      dk_dt = -ht / hk;
      for (int i = 0, q = 0; i < s.params(); ++i) {
        if (i == k) continue;
        dk_dx[q++] = -(j.grad[i].imag() / t) / hk;
      }
    }
    RealVec col(s.d, 0.0);
    col[k] = dk_dt;
    col.back() = (j.grad[k] * dk_dt + cplx(0.0, 1.0) * grad_omega).real();
    n.dg.push_back(col);
    for (int i = 0, q = 0; i < s.params(); ++i) {
      if (i == k) continue;
      RealVec c(s.d, 0.0);
      c[i] = 1.0;
      c[k] = dk_dx[q];
      c.back() = (j.grad[i] + j.grad[k] * dk_dx[q]).real();
      n.dg.push_back(c);
      ++q;
    }
    return n;
  }
};

ComplexPatch build_once(const AnalyticGraph& s, const Direction& dir, const RealVec& v, double tau,
                        const PatchOptions& opt, const RealVec& x0, int k, bool degenerate,
                        const BumpSpec& bump) {
  const int q = s.d - 2;
  const GaussRule rt = gauss_legendre(opt.n_t, bump.t_center - bump.t_radius, bump.t_center + bump.t_radius);
  std::vector<RealVec> xhats{RealVec{}};
  std::vector<double> xw{1.0};
  if (q > 0) {
    const GaussRule rx = gauss_legendre(opt.n_x, -bump.x_radius, bump.x_radius);
    xhats.clear();
    xw.clear();
    std::vector<int> idx(q, 0);
    while (true) {
      RealVec p(q);
      double w = 1.0;
      for (int a = 0; a < q; ++a) {
        p[a] = bump.x_center[a] + rx.nodes[idx[a]];
        w *= rx.weights[idx[a]];
      }
      if (bump.value(bump.t_center, p) > 0.0) {
        xhats.push_back(p);
        xw.push_back(w);
      }
      int a = q - 1;
      while (a >= 0 && ++idx[a] == opt.n_x) idx[a--] = 0;
      if (a < 0) break;
    }
  }
  PatchSolver solver{s, dir, k, degenerate};
  std::vector<std::vector<PatchNode>> lines(xhats.size());
  parallel_for(xhats.size(), [&](std::size_t li) {
    const RealVec& xhat = xhats[li];
    double xk = x0[k];
    if (!degenerate) {
      xk = solver.solve(xk, xhat, 0.0);
      // Continue in t from the real tangency solution to the first node.
      const int steps = 8;
      for (int i = 1; i <= steps; ++i) xk = solver.solve(xk, xhat, rt.nodes.front() * i / steps);
    }
    for (int ti = 0; ti < opt.n_t; ++ti) {
      const double t = rt.nodes[ti];
      if (!degenerate) xk = solver.solve(xk, xhat, t);
      PatchNode n = solver.node(xk, xhat, t);
      if (!s.in_domain(n.x)) {
        throw NewtonDivergence("build_patch: solved point leaves the domain |x| < delta");
      }
      n.psi = bump.value(t, xhat);
      n.weight = n.psi * rt.weights[ti] * xw[li];
      lines[li].push_back(std::move(n));
    }
  });
  ComplexPatch p;
  p.surface = s;
  p.v = v;
  p.tau = tau;
  p.solve_index = k;
  p.tangency = x0;
  p.bump = bump;
  p.options = opt;
  p.degenerate = degenerate;
  for (auto& line : lines)
    for (auto& n : line) p.nodes.push_back(std::move(n));
  return p;
}

}  // namespace

ComplexPatch build_patch(const AnalyticGraph& s, const RealVec& v, double tau, const PatchOptions& opt) {
  const Direction dir = split_direction(s, v);
  if (!(tau > 0.0) || !(2.0 * tau < s.delta)) {
    throw ValidationError("build_patch: need 0 < tau and 2 tau < delta");
  }
  if (opt.n_t < 2 || opt.n_x < 2) throw ValidationError("build_patch: grid sizes must be >= 2");
  const int m = s.params();
  const auto x0 = tangency_point(s, v, RealVec(m, 0.0));
  if (!x0) {
    throw PreconditionViolated("build_patch: no tangency point grad f . omega = w_d in the domain; v is not admissible");
  }
  const Eigen::MatrixXd h = s.hessian(*x0);
  RealVec hw(m, 0.0);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) hw[a] += h(a, b) * dir.omega[b];
  const double wn2 = dot(dir.omega, dir.omega);
  const bool curved = wn2 > 0.0 && std::abs(quad_form(h, dir.omega)) > 1e-8 * wn2;
  if (!curved && !opt.allow_degenerate) {
    throw PreconditionViolated("build_patch: v is an asymptotic direction at its tangency point");
  }
  int k = opt.solve_index;
  if (k < 0) {
    k = 0;
    for (int a = 1; a < m; ++a)
      if (std::abs(hw[a]) > std::abs(hw[k])) k = a;
  }
  if (k >= m) throw ValidationError("build_patch: solve_index out of range");
  const bool degenerate = opt.allow_degenerate && std::abs(hw[k]) < 1e-10;
  if (!degenerate && std::abs(hw[k]) < 1e-10) {
    throw PreconditionViolated("build_patch: dh/dx_k vanishes at the tangency point");
  }

  BumpSpec bump;
  if (opt.fixed_bump) {
    bump = *opt.fixed_bump;
  } else {
    bump.t_center = 1.5 * tau;
    bump.t_radius = 0.5 * tau;
    bump.exponent = opt.bump_exponent;
    for (int a = 0; a < m; ++a)
      if (a != k) bump.x_center.push_back((*x0)[a]);
    if (opt.x_center) {
      if (opt.x_center->size() != bump.x_center.size()) throw ValidationError("build_patch: x_center size");
      bump.x_center = *opt.x_center;
    }
    bump.x_radius = opt.x_radius > 0.0 ? opt.x_radius : 0.5 * s.delta;
    bump.x_radius = std::min(bump.x_radius, 0.9 * (s.delta - norm(bump.x_center)));
    if (m > 1 && !(bump.x_radius > 0.0)) throw ValidationError("build_patch: bump centre outside the domain");
  }

  for (int attempt = 0;; ++attempt) {
    ComplexPatch p = build_once(s, dir, v, tau, opt, *x0, k, degenerate, bump);
    p.bump_adjustments = attempt;
    if (opt.allow_degenerate) return p;
    RealVec bad_center(bump.x_center.size(), 0.0);
    int bad = 0;
    for (const auto& n : p.nodes) {
      if (n.psi > 0.0 && std::abs(n.stationary_r1) < opt.stationary_tolerance &&
          std::abs(n.stationary_r2) < opt.stationary_tolerance) {
        ++bad;
        for (std::size_t a = 0; a < bad_center.size(); ++a) bad_center[a] += n.xhat[a];
      }
    }
    if (bad == 0) return p;
    if (attempt > 0 || bump.x_center.empty() || opt.fixed_bump) {
      throw BumpOverlapsStationarySet("build_patch: " + std::to_string(bad) +
                                      " bump-support nodes lie on the stationary set");
    }
    // Move away from the offending nodes and halve the radius.
    RealVec away(bump.x_center.size());
    for (std::size_t a = 0; a < away.size(); ++a) away[a] = bump.x_center[a] - bad_center[a] / bad;
    const double an = norm(away);
    for (std::size_t a = 0; a < away.size(); ++a) {
      bump.x_center[a] += an > 1e-12 ? 0.5 * bump.x_radius * away[a] / an : 0.0;
    }
    bump.x_radius *= 0.5;
  }
}

ComplexPatch rebuild_patch(const ComplexPatch& p, int n_t, int n_x) {
  PatchOptions opt = p.options;
  opt.n_t = n_t;
  opt.n_x = n_x;
  opt.fixed_bump = p.bump;
  opt.solve_index = p.solve_index;
  return build_patch(p.surface, p.v, p.tau, opt);
}

}  // namespace toral
