#include "toral/eigenfun.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "toral/errors.hpp"
#include "toral/parallel.hpp"

namespace toral {

namespace {

double lattice_dot(const LatticePoint& xi, const RealVec& x) {
  double s = 0.0;
  for (std::size_t i = 0; i < xi.dim(); ++i) s += static_cast<double>(xi[i]) * x[i];
  return s;
}

void check_dim(std::size_t got, int want, const char* what) {
  if (got != static_cast<std::size_t>(want)) {
    throw ValidationError(std::string(what) + ": expected dimension " + std::to_string(want) +
                          ", got " + std::to_string(got));
  }
}

}  // namespace

Eigenfunction::Eigenfunction(int d, std::int64_t r2, CoeffMap coeffs, bool real_valued)
    : d_(d), r2_(r2), coeffs_(std::move(coeffs)), real_valued_(real_valued) {
  if (d < 1) throw ValidationError("Eigenfunction: dimension must be positive");
  if (r2 < 0) throw ValidationError("Eigenfunction: r2 must be non-negative");
  for (const auto& [xi, a] : coeffs_) {
    if (xi.dim() != static_cast<std::size_t>(d)) {
      throw ValidationError("Eigenfunction: frequency of wrong dimension");
    }
    if (xi.norm2() != r2) {
      throw ValidationError("Eigenfunction: frequency off the shell r2=" + std::to_string(r2));
    }
    if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) {
      throw ValidationError("Eigenfunction: non-finite coefficient");
    }
  }
  if (real_valued_ && !has_conjugate_symmetry(1e-12)) {
    throw ValidationError("Eigenfunction: real-valued flag without conjugate symmetry");
  }
}

double Eigenfunction::lambda() const { return std::sqrt(static_cast<double>(r2_)); }

cplx Eigenfunction::coeff(const LatticePoint& xi) const {
  auto it = coeffs_.find(xi);
  return it == coeffs_.end() ? cplx{} : it->second;
}

double Eigenfunction::l2_mass() const {
  double s = 0.0;
  for (const auto& [xi, a] : coeffs_) s += std::norm(a);
  return s;
}

Eigenfunction Eigenfunction::normalized() const {
  const double m = l2_mass();
  if (!(m > 0.0)) throw ValidationError("Eigenfunction: cannot normalize the zero function");
  const double s = 1.0 / std::sqrt(m);
  CoeffMap c;
  for (const auto& [xi, a] : coeffs_) c.emplace(xi, a * s);
  return Eigenfunction(d_, r2_, std::move(c), real_valued_);
}

bool Eigenfunction::has_conjugate_symmetry(double tol) const {
  for (const auto& [xi, a] : coeffs_) {
    if (std::abs(coeff(-xi) - std::conj(a)) > tol) return false;
  }
  return true;
}

cplx Eigenfunction::evaluate(const RealVec& x) const {
  check_dim(x.size(), d_, "evaluate");
  cplx s{};
  for (const auto& [xi, a] : coeffs_) s += a * unit_phase(lattice_dot(xi, x));
  return s;
}

std::vector<cplx> Eigenfunction::evaluate_many(const std::vector<RealVec>& xs) const {
  std::vector<cplx> out(xs.size());
  parallel_for(xs.size(), [&](std::size_t i) { out[i] = evaluate(xs[i]); });
  return out;
}

cplx Eigenfunction::evaluate_complex(const ComplexVec& z, double imag_bound) const {
  check_dim(z.size(), d_, "evaluate_complex");
  RealVec re(z.size()), im(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) {
    re[i] = z[i].real();
    im[i] = z[i].imag();
    if (std::abs(im[i]) > imag_bound) {
      throw ValidationError("evaluate_complex: |Im Z| exceeds bound " + std::to_string(imag_bound));
    }
  }
  cplx s{};
  for (const auto& [xi, a] : coeffs_) {
    s += a * unit_phase(lattice_dot(xi, re)) * std::exp(-kTwoPi * lattice_dot(xi, im));
  }
  return s;
}

Eigenfunction Eigenfunction::permute(const std::vector<int>& perm) const {
  check_dim(perm.size(), d_, "permute");
  std::vector<int> seen(perm.begin(), perm.end());
  std::sort(seen.begin(), seen.end());
  for (int i = 0; i < d_; ++i)
    if (seen[i] != i) throw ValidationError("permute: not a permutation");
  CoeffMap c;
  for (const auto& [xi, a] : coeffs_) {
    std::vector<std::int64_t> p(d_);
    for (int i = 0; i < d_; ++i) p[i] = xi[perm[i]];
    c.emplace(LatticePoint(std::move(p)), a);
  }
  return Eigenfunction(d_, r2_, std::move(c), real_valued_);
}

Eigenfunction random_eigenfunction(const LatticeShell& shell, std::uint64_t seed,
                                   bool real_valued) {
  if (shell.size() == 0) throw ValidationError("random_eigenfunction: empty shell");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  Eigenfunction::CoeffMap c;
  for (const auto& xi : shell.points) {
    if (real_valued) {
      if (c.count(xi)) continue;
      const cplx a{g(rng), g(rng)};
      c.emplace(xi, a);
      c.emplace(-xi, std::conj(a));
    } else {
      c.emplace(xi, cplx{g(rng), g(rng)});
    }
  }
  return Eigenfunction(shell.d, shell.r2, std::move(c), real_valued).normalized();
}

ShiftFrame ShiftFrame::from(const LatticePoint& xi0) {
  const std::int64_t r2 = xi0.norm2();
  if (r2 == 0) throw ValidationError("ShiftFrame: xi0 must be nonzero");
  ShiftFrame f{xi0, r2, xi0.to_real()};
  const double lam = std::sqrt(static_cast<double>(r2));
  for (double& v : f.v0) v = -v / lam;
  return f;
}

double ShiftFrame::lambda() const { return std::sqrt(static_cast<double>(r2)); }

double shift_height(const ShiftFrame& frame, const LatticePoint& xi) {
  if (xi.dim() != frame.xi0.dim() || xi.norm2() != frame.r2) {
    throw ValidationError("shift_height: frequency not on the shell of xi0");
  }
  return static_cast<double>(frame.r2 - dot(xi, frame.xi0)) / frame.lambda();
}

double default_cutoff(double lambda, double multiplier) {
  if (!(lambda > 1.0)) throw ValidationError("default_cutoff: lambda must exceed 1");
  const double l = std::log(lambda);
  return std::ceil(multiplier * l * l);
}

ShortSupport short_support(const Eigenfunction& phi, const ShiftFrame& frame, double cutoff) {
  if (!(cutoff > 0.0)) throw ValidationError("short_support: D must be positive");
  if (phi.r2() != frame.r2) throw MismatchedFrame("short_support: frame on a different shell");
  ShortSupport out;
  out.cutoff = cutoff;
  out.predicted_cap_radius = std::sqrt(2.0 * frame.lambda() * cutoff);
  for (const auto& [xi, a] : phi.coeffs()) {
    if (shift_height(frame, xi) < cutoff) {
      out.frequencies.push_back(xi);
      out.cap_radius =
          std::max(out.cap_radius, std::sqrt(static_cast<double>(distance2(xi, frame.xi0))));
    }
  }
  return out;
}

double short_sum_tail_bound(std::size_t count, double tau, double cutoff, double l2_mass) {
  return std::sqrt(static_cast<double>(count) * l2_mass) * std::exp(-kTwoPi * tau * cutoff);
}

cplx shifted_value(const Eigenfunction& phi, const ShiftFrame& frame, const ComplexVec& z) {
  check_dim(z.size(), phi.d(), "shifted_value");
  RealVec re(z.size()), im(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) {
    re[i] = z[i].real();
    im[i] = z[i].imag();
  }
  cplx s{};
  for (const auto& [xi, a] : phi.coeffs()) {
    const LatticePoint diff = xi - frame.xi0;
    s += a * unit_phase(lattice_dot(diff, re)) * std::exp(-kTwoPi * lattice_dot(diff, im));
  }
  return s;
}

ShortSum short_sum_with_tail(const Eigenfunction& phi, const ShiftFrame& frame,
                             const ComplexVec& z, double tau, double cutoff) {
  check_dim(z.size(), phi.d(), "short_sum_with_tail");
  if (!(tau > 0.0)) throw ValidationError("short_sum_with_tail: tau must be positive");
  if (phi.r2() != frame.r2) throw MismatchedFrame("short_sum_with_tail: frame on another shell");
  RealVec re(z.size()), im(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) {
    re[i] = z[i].real();
    im[i] = z[i].imag();
  }
  const double t = dot(im, frame.v0);
  double off = 0.0;
  for (std::size_t i = 0; i < im.size(); ++i) off = std::max(off, std::abs(im[i] - t * frame.v0[i]));
  constexpr double tol = 1e-9;
  if (off > tol || t <= tau - tol || t >= 2.0 * tau + tol) {
    throw ValidationError("short_sum_with_tail: Z is not in the slab Im Z = t v0, tau < t < 2 tau");
  }
  ShortSum out;
  out.t = t;
  for (const auto& [xi, a] : phi.coeffs()) {
    const double A = shift_height(frame, xi);
    if (A > cutoff) continue;
    const LatticePoint diff = xi - frame.xi0;
    out.value += a * unit_phase(lattice_dot(diff, re)) * std::exp(-kTwoPi * t * A);
    ++out.terms;
  }
  out.tail_bound = short_sum_tail_bound(phi.support_size(), tau, cutoff, phi.l2_mass());
  return out;
}

Eigenfunction make_geodesic_vanisher(const LatticePoint& xi, double c, int n) {
  if (xi.norm2() == 0) throw ValidationError("make_geodesic_vanisher: xi must be nonzero");
  if (n < 1) throw ValidationError("make_geodesic_vanisher: n must be positive");
  std::vector<std::int64_t> p(xi.dim());
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = n * xi[i];
  const LatticePoint k(std::move(p));
  // sin(theta) = (e^{i theta} - e^{-i theta}) / 2i with theta = 2 pi n (<xi,x> - c).
  const cplx shift = unit_phase(-static_cast<double>(n) * c);
  const cplx two_i{0.0, 2.0};
  const double s = std::sqrt(2.0);
  Eigenfunction::CoeffMap m;
  m.emplace(k, s * shift / two_i);
  m.emplace(-k, -s * std::conj(shift) / two_i);
  return Eigenfunction(static_cast<int>(xi.dim()), k.norm2(), std::move(m), true);
}

Eigenfunction make_cylinder(const Eigenfunction& phi0, int n) {
  if (phi0.d() != 2) throw ValidationError("make_cylinder: phi0 must live on T^2");
  if (n < 0) throw ValidationError("make_cylinder: n must be non-negative");
  Eigenfunction::CoeffMap m;
  for (const auto& [xi, a] : phi0.coeffs()) {
    if (n == 0) {
      m.emplace(LatticePoint{xi[0], xi[1], 0}, a);
    } else {
      m.emplace(LatticePoint{xi[0], xi[1], n}, 0.5 * a);
      m.emplace(LatticePoint{xi[0], xi[1], -n}, 0.5 * a);
    }
  }
  Eigenfunction out(3, phi0.r2() + static_cast<std::int64_t>(n) * n, std::move(m),
                    phi0.real_valued());
  return phi0.l2_mass() > 0.0 ? out.normalized() : out;
}

double LineFamily::offset_residual(const RealVec& x) const {
  const double s = lattice_dot(normal, x) - alpha;
  return std::abs(s - std::nearbyint(s));
}

LineFamily two_frequency_nodal(const LatticePoint& xi, const LatticePoint& xi_prime,
                               double alpha) {
  if (xi.dim() != xi_prime.dim()) throw ValidationError("two_frequency_nodal: dimension mismatch");
  if (xi == xi_prime) throw ValidationError("two_frequency_nodal: frequencies must differ");
  if (xi.norm2() != xi_prime.norm2()) {
    throw ValidationError("two_frequency_nodal: frequencies are on different shells");
  }
  return LineFamily{xi - xi_prime, alpha};
}

Eigenfunction two_frequency_function(const LatticePoint& xi, const LatticePoint& xi_prime,
                                     double alpha) {
  two_frequency_nodal(xi, xi_prime, alpha);
  Eigenfunction::CoeffMap m;
  m.emplace(xi, cplx{1.0, 0.0});
  m.emplace(xi_prime, -unit_phase(alpha));
  return Eigenfunction(static_cast<int>(xi.dim()), xi.norm2(), std::move(m));
}

}  // namespace toral
