#include "toral/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <string>

#include "toral/errors.hpp"

namespace toral {

namespace {

std::int64_t isqrt(std::int64_t n) {
  auto r = static_cast<std::int64_t>(std::sqrt(static_cast<double>(n)));
  while (r > 0 && r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

struct ShellSearch {
  int d;
  std::uint64_t limit;
  std::uint64_t visits = 0;
  std::vector<std::int64_t> coords;
  std::vector<LatticePoint> out;

  void visit() {
    if (++visits > limit) {
      throw ResourceLimitError("enumerate_shell: more than " + std::to_string(limit) +
                               " candidate visits");
    }
  }

  void recurse(int i, std::int64_t rem) {
    if (i == d - 1) {
      visit();
      const std::int64_t s = isqrt(rem);
      if (s * s != rem) return;
      if (s == 0) {
        coords[i] = 0;
        out.emplace_back(coords);
      } else {
        coords[i] = -s;
        out.emplace_back(coords);
        coords[i] = s;
        out.emplace_back(coords);
      }
      return;
    }
    const std::int64_t b = isqrt(rem);
    for (std::int64_t n = -b; n <= b; ++n) {
      visit();
      coords[i] = n;
      recurse(i + 1, rem - n * n);
    }
  }
};

std::vector<std::vector<std::size_t>> adjacency(const LatticeShell& shell, const IndexSet& nodes,
                                                const SeparationThreshold& thr) {
  std::vector<std::vector<std::size_t>> adj(nodes.size());
  for (std::size_t a = 0; a < nodes.size(); ++a) {
    for (std::size_t b = a + 1; b < nodes.size(); ++b) {
      if (thr.within(distance2(shell.points[nodes[a]], shell.points[nodes[b]]))) {
        adj[a].push_back(b);
        adj[b].push_back(a);
      }
    }
  }
  return adj;
}

IndexSet all_indices(std::size_t n) {
  IndexSet all(n);
  for (std::size_t i = 0; i < n; ++i) all[i] = i;
  return all;
}

double to_double(const Rational& q) { return q.convert_to<double>(); }

}  // namespace

std::int64_t LatticePoint::norm2() const { return dot(*this, *this); }

RealVec LatticePoint::to_real() const {
  return RealVec(coords_.begin(), coords_.end());
}

LatticePoint LatticePoint::operator-(const LatticePoint& o) const {
  std::vector<std::int64_t> c(coords_.size());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = coords_[i] - o.coords_[i];
  return LatticePoint(std::move(c));
}

LatticePoint LatticePoint::operator+(const LatticePoint& o) const {
  std::vector<std::int64_t> c(coords_.size());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = coords_[i] + o.coords_[i];
  return LatticePoint(std::move(c));
}

LatticePoint LatticePoint::operator-() const {
  std::vector<std::int64_t> c(coords_.size());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = -coords_[i];
  return LatticePoint(std::move(c));
}

std::int64_t dot(const LatticePoint& a, const LatticePoint& b) {
  if (a.dim() != b.dim()) throw ValidationError("dot: dimension mismatch");
  std::int64_t s = 0;
  for (std::size_t i = 0; i < a.dim(); ++i) s += a[i] * b[i];
  return s;
}

std::int64_t distance2(const LatticePoint& a, const LatticePoint& b) {
  if (a.dim() != b.dim()) throw ValidationError("distance2: dimension mismatch");
  std::int64_t s = 0;
  for (std::size_t i = 0; i < a.dim(); ++i) {
    const std::int64_t t = a[i] - b[i];
    s += t * t;
  }
  return s;
}

double LatticeShell::radius() const { return std::sqrt(static_cast<double>(r2)); }

LatticeShell enumerate_shell(int d, std::int64_t r2, std::uint64_t visit_limit) {
  if (d < 2) throw ValidationError("enumerate_shell: dimension must be >= 2");
  if (r2 < 1) throw ValidationError("enumerate_shell: r2 must be >= 1");
  ShellSearch search{d, visit_limit, 0, std::vector<std::int64_t>(d, 0), {}};
  search.recurse(0, r2);
  return LatticeShell{d, r2, std::move(search.out)};
}

RecursionConstants recursion_constants(int d, const Rational& delta2) {
  if (d < 2) throw ValidationError("recursion_constants: dimension must be >= 2");
  if (delta2 <= 0 || delta2 >= Rational(1, 3)) {
    throw ValidationError("recursion_constants: delta(2) must lie in (0, 1/3)");
  }
  RecursionConstants k{Rational(0), delta2};
  for (int dim = 3; dim <= d; ++dim) {
    const Rational candidate = Rational(dim) / k.delta;
    k.c = 2 * std::max(k.c, candidate);
    k.delta = Rational(1) / (2 * (dim + 1) * (1 + k.c));
  }
  return k;
}

SeparationThreshold::SeparationThreshold(double rho) : rho_(rho) {
  if (!(rho >= 0.0) || !std::isfinite(rho)) {
    throw ValidationError("separation scale rho must be finite and non-negative");
  }
  const Rational r = exact_rational(rho);
  const Rational sq = r * r;
  const BigInt fl = boost::multiprecision::numerator(sq) / boost::multiprecision::denominator(sq);
  const BigInt cap(std::numeric_limits<std::int64_t>::max());
  floor_rho2_ = fl > cap ? std::numeric_limits<std::int64_t>::max() : fl.convert_to<std::int64_t>();
}

IndexSet cap_points(const LatticeShell& shell, const RealVec& center, double euclidean_radius) {
  if (center.size() != static_cast<std::size_t>(shell.d)) {
    throw ValidationError("cap_points: center has wrong dimension");
  }
  if (std::abs(norm(center) - 1.0) > 1e-12) {
    throw ValidationError("cap_points: center must be a unit vector");
  }
  if (!(euclidean_radius >= 0.0)) throw ValidationError("cap_points: negative radius");
  const double R = shell.radius();
  const double r2 = euclidean_radius * euclidean_radius;
  IndexSet out;
  for (std::size_t i = 0; i < shell.points.size(); ++i) {
    double s = 0.0;
    for (int j = 0; j < shell.d; ++j) {
      const double t = static_cast<double>(shell.points[i][j]) - R * center[j];
      s += t * t;
    }
    if (s < r2) out.push_back(i);
  }
  return out;
}

int affine_rank(const std::vector<LatticePoint>& points) {
  if (points.empty()) throw ValidationError("affine_rank: empty point list");
  const std::size_t rows = points.size() - 1;
  const std::size_t cols = points.front().dim();
  std::vector<std::vector<BigInt>> m(rows, std::vector<BigInt>(cols));
  for (std::size_t r = 0; r < rows; ++r) {
    const LatticePoint diff = points[r + 1] - points[0];
    for (std::size_t c = 0; c < cols; ++c) m[r][c] = diff[c];
  }
  // Fraction-free (Bareiss) elimination.
  int rank = 0;
  BigInt prev_pivot = 1;
  std::size_t pivot_row = 0;
  for (std::size_t col = 0; col < cols && pivot_row < rows; ++col) {
    std::size_t sel = pivot_row;
    while (sel < rows && m[sel][col] == 0) ++sel;
    if (sel == rows) continue;
    std::swap(m[sel], m[pivot_row]);
    const BigInt pivot = m[pivot_row][col];
    for (std::size_t r = pivot_row + 1; r < rows; ++r) {
      for (std::size_t c = col + 1; c < cols; ++c) {
        m[r][c] = (pivot * m[r][c] - m[r][col] * m[pivot_row][c]) / prev_pivot;
      }
      m[r][col] = 0;
    }
    prev_pivot = pivot;
    ++pivot_row;
    ++rank;
  }
  return rank;
}

JarnikReport jarnik_scan(const LatticeShell& shell, double cap_radius) {
  if (!(cap_radius > 0.0)) throw ValidationError("jarnik_scan: cap_radius must be positive");
  JarnikReport report;
  report.cap_radius = cap_radius;
  const double R = shell.radius();
  for (std::size_t i = 0; i < shell.points.size(); ++i) {
    RealVec center = shell.points[i].to_real();
    for (double& c : center) c /= R;
    // Renormalize so the unit-norm check holds to rounding.
    const double n = norm(center);
    for (double& c : center) c /= n;
    IndexSet members = cap_points(shell, center, cap_radius);
    ++report.caps_checked;
    std::vector<LatticePoint> pts;
    pts.reserve(members.size());
    for (auto k : members) pts.push_back(shell.points[k]);
    if (pts.empty()) continue;
    const int rank = affine_rank(pts);
    if (rank > shell.d - 1) {
      JarnikViolation v{i, members, rank};
      report.violations.push_back(v);
      if (shell.d == 2) report.noncollinear_triples.push_back(std::move(v));
    }
  }
  return report;
}

IndexSet grow_overset(const LatticeShell& shell, const IndexSet& seed, double rho,
                      const std::optional<IndexSet>& universe) {
  if (!(rho > 0.0)) throw ValidationError("grow_overset: rho must be positive");
  const SeparationThreshold thr(rho);
  const IndexSet pool = universe ? *universe : all_indices(shell.size());
  std::vector<char> in_pool(shell.size(), 0), taken(shell.size(), 0);
  for (auto i : pool) in_pool[i] = 1;
  std::deque<std::size_t> frontier;
  for (auto i : seed) {
    if (i >= shell.size()) throw ValidationError("grow_overset: seed index out of range");
    if (!taken[i]) {
      taken[i] = 1;
      frontier.push_back(i);
    }
  }
  while (!frontier.empty()) {
    const std::size_t cur = frontier.front();
    frontier.pop_front();
    for (auto j : pool) {
      if (taken[j] || !in_pool[j]) continue;
      if (thr.within(distance2(shell.points[cur], shell.points[j]))) {
        taken[j] = 1;
        frontier.push_back(j);
      }
    }
  }
  IndexSet out;
  for (std::size_t i = 0; i < shell.size(); ++i)
    if (taken[i]) out.push_back(i);
  return out;
}

ClusterDecomposition cluster_decompose(const LatticeShell& shell, const ClusterParams& params) {
  return cluster_decompose(shell, all_indices(shell.size()), params);
}

ClusterDecomposition cluster_decompose(const LatticeShell& shell, const IndexSet& subset,
                                       const ClusterParams& params) {
  if (!(params.rho > 0.0)) throw ValidationError("cluster_decompose: rho must be positive");
  ClusterDecomposition out;
  out.rho = params.rho;
  out.constants = params.constants(shell.d);
  const double c = to_double(out.constants.c);
  const double delta = to_double(out.constants.delta);
  out.hypothesis_holds = std::log(params.rho) < delta * std::log(shell.radius());

  // Squared seed-ball radius rho^{2(1+c)}, saturating for huge exponents.
  const double log_ball2 = 2.0 * (1.0 + c) * std::log(params.rho);
  const bool ball_covers_all = log_ball2 > std::log(4.0 * static_cast<double>(shell.r2) + 1.0);
  const long double ball2 = ball_covers_all ? 0.0L : std::exp(static_cast<long double>(log_ball2));

  IndexSet remaining = subset;
  std::sort(remaining.begin(), remaining.end());
  while (!remaining.empty()) {
    const std::size_t first = remaining.front();
    IndexSet seed;
    for (auto j : remaining) {
      const auto dist2 = static_cast<long double>(distance2(shell.points[first], shell.points[j]));
      if (ball_covers_all || dist2 < ball2) seed.push_back(j);
    }
    IndexSet cluster = grow_overset(shell, seed, params.rho, remaining);
    IndexSet rest;
    std::set_difference(remaining.begin(), remaining.end(), cluster.begin(), cluster.end(),
                        std::back_inserter(rest));
    remaining = std::move(rest);

    std::int64_t diam2 = 0;
    for (std::size_t a = 0; a < cluster.size(); ++a)
      for (std::size_t b = a + 1; b < cluster.size(); ++b)
        diam2 = std::max(diam2, distance2(shell.points[cluster[a]], shell.points[cluster[b]]));
    out.diameters.push_back(std::sqrt(static_cast<double>(diam2)));
    out.clusters.push_back(std::move(cluster));
  }

  std::int64_t min_sep2 = std::numeric_limits<std::int64_t>::max();
  for (std::size_t a = 0; a < out.clusters.size(); ++a)
    for (std::size_t b = a + 1; b < out.clusters.size(); ++b)
      for (auto i : out.clusters[a])
        for (auto j : out.clusters[b])
          min_sep2 = std::min(min_sep2, distance2(shell.points[i], shell.points[j]));
  out.min_intercluster_distance = out.clusters.size() < 2
                                      ? std::numeric_limits<double>::infinity()
                                      : std::sqrt(static_cast<double>(min_sep2));
  return out;
}

std::vector<IndexSet> proximity_components(const LatticeShell& shell, double rho) {
  const SeparationThreshold thr(rho);
  const IndexSet nodes = all_indices(shell.size());
  const auto adj = adjacency(shell, nodes, thr);
  std::vector<int> comp(nodes.size(), -1);
  std::vector<IndexSet> out;
  for (std::size_t s = 0; s < nodes.size(); ++s) {
    if (comp[s] >= 0) continue;
    const int id = static_cast<int>(out.size());
    out.emplace_back();
    std::deque<std::size_t> q{s};
    comp[s] = id;
    while (!q.empty()) {
      const auto u = q.front();
      q.pop_front();
      out.back().push_back(u);
      for (auto v : adj[u]) {
        if (comp[v] < 0) {
          comp[v] = id;
          q.push_back(v);
        }
      }
    }
    std::sort(out.back().begin(), out.back().end());
  }
  return out;
}

int max_chain_length(const LatticeShell& shell, double rho) {
  if (!(rho > 0.0)) throw ValidationError("max_chain_length: rho must be positive");
  const SeparationThreshold thr(rho);
  const IndexSet nodes = all_indices(shell.size());
  const auto adj = adjacency(shell, nodes, thr);
  int best = 0;
  std::vector<int> dist(nodes.size());
  for (std::size_t s = 0; s < nodes.size(); ++s) {
    if (adj[s].empty()) continue;
    std::fill(dist.begin(), dist.end(), -1);
    dist[s] = 0;
    std::deque<std::size_t> q{s};
    while (!q.empty()) {
      const auto u = q.front();
      q.pop_front();
      best = std::max(best, dist[u]);
      for (auto v : adj[u]) {
        if (dist[v] < 0) {
          dist[v] = dist[u] + 1;
          q.push_back(v);
        }
      }
    }
  }
  return best;
}

}  // namespace toral
