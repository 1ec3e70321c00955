#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "toral/errors.hpp"
#include "toral/lattice.hpp"

using namespace toral;

namespace {

// Brute force over the full box; independent of the recursive search.
std::vector<LatticePoint> brute_shell(int d, std::int64_t r2) {
  const auto b = static_cast<std::int64_t>(std::sqrt(static_cast<double>(r2))) + 1;
  std::vector<LatticePoint> out;
  std::vector<std::int64_t> c(d, -b);
  while (true) {
    std::int64_t s = 0;
    for (auto v : c) s += v * v;
    if (s == r2) out.emplace_back(c);
    int i = d - 1;
    while (i >= 0 && c[i] == b) c[i--] = -b;
    if (i < 0) break;
    ++c[i];
  }
  return out;
}

struct UnionFind {
  std::vector<std::size_t> p;
  explicit UnionFind(std::size_t n) : p(n) { std::iota(p.begin(), p.end(), 0); }
  std::size_t find(std::size_t x) { return p[x] == x ? x : p[x] = find(p[x]); }
  void unite(std::size_t a, std::size_t b) { p[find(a)] = find(b); }
};

std::vector<std::size_t> component_labels(const LatticeShell& s, double rho) {
  UnionFind uf(s.size());
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t j = i + 1; j < s.size(); ++j) {
      const double dist = std::sqrt(static_cast<double>(distance2(s.points[i], s.points[j])));
      if (dist <= rho) uf.unite(i, j);
    }
  std::vector<std::size_t> lab(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) lab[i] = uf.find(i);
  return lab;
}

// Floyd-Warshall diameter over finite pairs.
int floyd_diameter(const LatticeShell& s, double rho) {
  const std::size_t n = s.size();
  const int inf = 1 << 28;
  std::vector<int> d(n * n, inf);
  for (std::size_t i = 0; i < n; ++i) {
    d[i * n + i] = 0;
    for (std::size_t j = 0; j < n; ++j)
      if (i != j && std::sqrt(static_cast<double>(distance2(s.points[i], s.points[j]))) <= rho)
        d[i * n + j] = 1;
  }
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        d[i * n + j] = std::min(d[i * n + j], d[i * n + k] + d[k * n + j]);
  int best = 0;
  for (int v : d)
    if (v < inf) best = std::max(best, v);
  return best;
}

}  // namespace

TEST_CASE("recursion constants") {
  auto k2 = recursion_constants(2, Rational(1, 4));
  CHECK(k2.c == 0);
  CHECK(k2.delta == Rational(1, 4));
  auto k3 = recursion_constants(3, Rational(1, 4));
  CHECK(k3.c == 24);
  CHECK(k3.delta == Rational(1, 200));
  auto k4 = recursion_constants(4, Rational(1, 4));
  CHECK(k4.c == 1600);
  CHECK(k4.delta == Rational(1, 16010));
  CHECK_THROWS_AS(recursion_constants(1, Rational(1, 4)), ValidationError);
  CHECK_THROWS_AS(recursion_constants(3, Rational(1, 3)), ValidationError);
  CHECK_THROWS_AS(recursion_constants(3, Rational(0)), ValidationError);
}

TEST_CASE("shell enumeration examples") {
  CHECK(enumerate_shell(2, 1).size() == 4);
  CHECK(enumerate_shell(2, 25).size() == 12);
  CHECK(enumerate_shell(2, 3).size() == 0);
  auto s = enumerate_shell(3, 2);
  CHECK(s.size() == 12);
  for (const auto& p : s.points) {
    int zeros = 0;
    for (std::size_t i = 0; i < 3; ++i) {
      zeros += p[i] == 0;
      CHECK(std::abs(p[i]) <= 1);
    }
    CHECK(zeros == 1);
  }
  CHECK_THROWS_AS(enumerate_shell(1, 4), ValidationError);
  CHECK_THROWS_AS(enumerate_shell(2, 0), ValidationError);
  CHECK_THROWS_AS(enumerate_shell(4, 1000000, 1000), ResourceLimitError);
}

TEST_CASE("shell enumeration matches brute force") {
  for (int d = 2; d <= 4; ++d) {
    for (std::int64_t r2 = 1; r2 <= (d == 2 ? 400 : 60); ++r2) {
      auto s = enumerate_shell(d, r2);
      auto b = brute_shell(d, r2);
      REQUIRE(s.points == b);
      CHECK(std::is_sorted(s.points.begin(), s.points.end()));
      CHECK(std::adjacent_find(s.points.begin(), s.points.end()) == s.points.end());
    }
  }
}

TEST_CASE("separation threshold is exact") {
  SeparationThreshold t(3.0);
  CHECK(t.floor_rho2() == 9);
  CHECK(t.within(9));
  CHECK(t.separated(10));
  SeparationThreshold u(std::sqrt(10.0));
  // sqrt(10) rounds below or above; floor(rho^2) is 9 or 10 accordingly.
  const Rational r = exact_rational(std::sqrt(10.0));
  CHECK(u.floor_rho2() == (r * r >= 10 ? 10 : 9));
  CHECK_THROWS_AS(SeparationThreshold(-1.0), ValidationError);
}

TEST_CASE("cap points") {
  auto s = enumerate_shell(2, 25);
  CHECK(cap_points(s, {1.0, 0.0}, 0.0).empty());
  CHECK(cap_points(s, {1.0, 0.0}, 10.5).size() == 12);
  auto c = cap_points(s, {1.0, 0.0}, 1.5);
  REQUIRE(c.size() == 1);
  CHECK(s.points[c[0]] == LatticePoint{5, 0});
  CHECK_THROWS_AS(cap_points(s, {1.0, 1.0}, 1.0), ValidationError);
}

TEST_CASE("affine rank") {
  CHECK(affine_rank({LatticePoint{5, 0}}) == 0);
  CHECK(affine_rank({LatticePoint{5, 0}, LatticePoint{-5, 0}}) == 1);
  CHECK(affine_rank({LatticePoint{5, 0}, LatticePoint{3, 4}, LatticePoint{0, 5}}) == 2);
  CHECK(affine_rank({LatticePoint{0, 0, 0}, LatticePoint{1, 1, 1}, LatticePoint{2, 2, 2},
                     LatticePoint{3, 3, 3}}) == 1);
  CHECK(affine_rank({LatticePoint{1, 0, 0}, LatticePoint{0, 1, 0}, LatticePoint{0, 0, 1},
                     LatticePoint{-1, 0, 0}}) == 3);
  CHECK_THROWS_AS(affine_rank({}), ValidationError);
}

TEST_CASE("jarnik scan") {
  auto s = enumerate_shell(2, 25);
  auto r = jarnik_scan(s, 0.5);
  CHECK(r.violations.empty());
  CHECK(r.caps_checked == 12);
  CHECK(jarnik_scan(s, 0.3 * std::pow(25.0, 1.0 / 6.0)).violations.empty());
  auto s3 = enumerate_shell(3, 9);
  auto big = jarnik_scan(s3, 100.0);
  CHECK(big.violations.size() == s3.size());
  CHECK(big.violations[0].affine_rank == 3);
  CHECK(jarnik_scan(s, 100.0).noncollinear_triples.size() == 12);
}

TEST_CASE("grow overset") {
  auto s = enumerate_shell(2, 25);
  IndexSet all(s.size());
  std::iota(all.begin(), all.end(), 0);
  CHECK(grow_overset(s, all, 1.0) == all);
  const auto i50 = static_cast<std::size_t>(
      std::find(s.points.begin(), s.points.end(), LatticePoint{5, 0}) - s.points.begin());
  // Nearest neighbours of (5,0) are at sqrt(10) > 3.
  CHECK(grow_overset(s, {i50}, 3.0) == IndexSet{i50});
  auto g = grow_overset(s, {i50}, 3.2);
  CHECK(g.size() > 1);
  CHECK(grow_overset(s, g, 3.2) == g);
  // Exterior separation.
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (std::binary_search(g.begin(), g.end(), i)) continue;
    for (auto j : g) CHECK(distance2(s.points[i], s.points[j]) > 10);
  }
}

TEST_CASE("cluster decomposition examples") {
  auto s = enumerate_shell(2, 25);
  ClusterParams p;
  p.rho = 1.0;
  auto iso = cluster_decompose(s, p);
  CHECK(iso.clusters.size() == s.size());
  p.rho = 10.0;
  auto one = cluster_decompose(s, p);
  CHECK(one.clusters.size() == 1);
  CHECK(std::isinf(one.min_intercluster_distance));
  p.rho = 2.0;
  auto two = cluster_decompose(s, p);
  auto lab = component_labels(s, 2.0);
  for (const auto& c : two.clusters)
    for (auto i : c) CHECK(lab[i] == lab[c[0]]);
}

TEST_CASE("cluster decomposition invariants on random shells") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const int d = 2 + trial % 2;
    const std::int64_t r2 = std::uniform_int_distribution<std::int64_t>(5, d == 2 ? 5000 : 300)(rng);
    auto s = enumerate_shell(d, r2);
    if (s.size() == 0) continue;
    for (double rho : {1.0, 2.5, 4.0, 7.5}) {
      ClusterParams p;
      p.rho = rho;
      auto dec = cluster_decompose(s, p);
      std::vector<int> owner(s.size(), -1);
      for (std::size_t c = 0; c < dec.clusters.size(); ++c)
        for (auto i : dec.clusters[c]) {
          CHECK(owner[i] == -1);
          owner[i] = static_cast<int>(c);
        }
      CHECK(std::count(owner.begin(), owner.end(), -1) == 0);
      SeparationThreshold thr(rho);
      for (std::size_t i = 0; i < s.size(); ++i)
        for (std::size_t j = i + 1; j < s.size(); ++j)
          if (owner[i] != owner[j]) CHECK(thr.separated(distance2(s.points[i], s.points[j])));
      auto lab = component_labels(s, rho);
      for (std::size_t i = 0; i < s.size(); ++i)
        for (std::size_t j = 0; j < s.size(); ++j)
          if (lab[i] == lab[j]) CHECK(owner[i] == owner[j]);
    }
  }
}

TEST_CASE("hypothesis flag") {
  auto s = enumerate_shell(2, 625);
  ClusterParams p;
  p.rho = 1.2;  // R^{1/4} = 5^{1/2}
  CHECK(cluster_decompose(s, p).hypothesis_holds);
  p.rho = 3.0;
  CHECK_FALSE(cluster_decompose(s, p).hypothesis_holds);
}

TEST_CASE("max chain length") {
  auto s = enumerate_shell(2, 25);
  CHECK(max_chain_length(s, 0.5) == 0);
  LatticeShell pair{2, 25, {LatticePoint{3, 4}, LatticePoint{4, 3}}};
  CHECK(max_chain_length(pair, 1.5) == 1);
  CHECK(max_chain_length(s, 3.0) == floyd_diameter(s, 3.0));
  auto big = enumerate_shell(2, 5525);
  for (double rho : {5.0, 12.0, 30.0}) CHECK(max_chain_length(big, rho) == floyd_diameter(big, rho));
}

TEST_CASE("proximity components match union find") {
  auto s = enumerate_shell(3, 50);
  auto comps = proximity_components(s, 3.0);
  auto lab = component_labels(s, 3.0);
  std::size_t total = 0;
  for (const auto& c : comps) {
    total += c.size();
    for (auto i : c) CHECK(lab[i] == lab[c[0]]);
  }
  CHECK(total == s.size());
}
