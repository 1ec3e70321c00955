#include "toral/cap.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "toral/errors.hpp"

namespace toral {

Cap::Cap(RealVec c, double a) : center(std::move(c)), angle(a) {
  const double n = norm(center);
  if (center.empty() || std::abs(n - 1.0) > 1e-9) {
    throw ValidationError("Cap: center must be a unit vector");
  }
  for (double& x : center) x /= n;
  if (!(angle > 0.0) || angle > std::numbers::pi) {
    throw ValidationError("Cap: angle must lie in (0, pi]");
  }
}

double vector_angle(const RealVec& a, const RealVec& b) {
  if (a.size() != b.size()) throw ValidationError("vector_angle: dimension mismatch");
  const double na = norm(a), nb = norm(b);
  if (!(na > 0.0) || !(nb > 0.0)) throw ValidationError("vector_angle: zero vector");
  double c = 0.0, s2 = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) c += a[i] / na * b[i] / nb;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double r = b[i] / nb - c * a[i] / na;
    s2 += r * r;
  }
  return std::atan2(std::sqrt(s2), c);
}

double Cap::angle_to(const RealVec& y) const { return vector_angle(center, y); }

bool Cap::contains(const RealVec& y, double slack) const {
  if (y.size() != center.size()) throw ValidationError("Cap::contains: dimension mismatch");
  const double n = norm(y);
  if (!(n > 0.0)) return false;
  return dot(y, center) / n >= std::cos(angle) - slack;
}


RealVec rotate_towards(const RealVec& center, const RealVec& dir, double angle) {
  RealVec e = dir;
  const double c = dot(dir, center);
  for (std::size_t i = 0; i < e.size(); ++i) e[i] -= c * center[i];
  const double n = norm(e);
  if (!(n > 1e-14)) throw ValidationError("rotate_towards: direction parallel to center");
  RealVec out(center.size());
  for (std::size_t i = 0; i < e.size(); ++i)
    out[i] = std::cos(angle) * center[i] + std::sin(angle) * e[i] / n;
  return out;
}

std::vector<RealVec> sample_sphere(int d, int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<RealVec> out;
  out.reserve(n);
  while (static_cast<int>(out.size()) < n) {
    RealVec v(d);
    for (double& x : v) x = g(rng);
    const double r = norm(v);
    if (r < 1e-12) continue;
    for (double& x : v) x /= r;
    out.push_back(std::move(v));
  }
  return out;
}

std::vector<RealVec> sample_cap(const Cap& cap, int n, std::uint64_t seed) {
  const int d = cap.dim();
  std::vector<RealVec> out;
  out.reserve(n);
  if (d == 2) {
    const RealVec perp{-cap.center[1], cap.center[0]};
    for (int i = 0; i < n; ++i) {
      const double a = n == 1 ? 0.0 : cap.angle * (2.0 * i / (n - 1) - 1.0);
      out.push_back(a == 0.0 ? cap.center : rotate_towards(cap.center, a > 0 ? perp : RealVec{-perp[0], -perp[1]}, std::abs(a)));
    }
    return out;
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const auto dirs = sample_sphere(d, 2 * n + 8, seed ^ 0x9e3779b97f4a7c15ULL);
  const double cos_a = std::cos(cap.angle);
  std::size_t k = 0;
  for (int i = 0; i < n; ++i) {
    double a = cap.angle;
    if (i >= n / 4) {
      // Uniform by area: cos(angle) uniform in [cos a, 1] is exact in d = 3
      // and a reasonable spread elsewhere.
      a = std::acos(1.0 - u(rng) * (1.0 - cos_a));
    }
    while (std::abs(dot(dirs[k % dirs.size()], cap.center)) > 0.999) ++k;
    out.push_back(a == 0.0 ? cap.center : rotate_towards(cap.center, dirs[k++ % dirs.size()], a));
  }
  return out;
}

}  // namespace toral
