#pragma once

// Lattice points on spheres: exact shell enumeration, affine rank, cap
// queries and the rho-separated cluster structure of a shell.

#include <compare>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <set>
#include <vector>

#include "toral/numeric.hpp"

namespace toral {

class LatticePoint {
 public:
  LatticePoint() = default;
  explicit LatticePoint(std::vector<std::int64_t> coords) : coords_(std::move(coords)) {}
  LatticePoint(std::initializer_list<std::int64_t> coords) : coords_(coords) {}

  std::size_t dim() const { return coords_.size(); }
  std::int64_t operator[](std::size_t i) const { return coords_[i]; }
  const std::vector<std::int64_t>& coords() const { return coords_; }

  std::int64_t norm2() const;
  RealVec to_real() const;

  LatticePoint operator-(const LatticePoint& o) const;
  LatticePoint operator+(const LatticePoint& o) const;
  LatticePoint operator-() const;

  // Lexicographic.
  auto operator<=>(const LatticePoint&) const = default;
  bool operator==(const LatticePoint&) const = default;

 private:
  std::vector<std::int64_t> coords_;
};

std::int64_t dot(const LatticePoint& a, const LatticePoint& b);
std::int64_t distance2(const LatticePoint& a, const LatticePoint& b);

using IndexSet = std::vector<std::size_t>;  // sorted, duplicate-free

struct LatticeShell {
  int d = 0;
  std::int64_t r2 = 0;
  std::vector<LatticePoint> points;  // lexicographically sorted

  double radius() const;
  std::size_t size() const { return points.size(); }
};

inline constexpr std::uint64_t kDefaultVisitLimit = 100'000'000;

// All x in Z^d with |x|^2 == r2, sorted. Throws ResourceLimitError when the
// recursive search would visit more than visit_limit candidates.
LatticeShell enumerate_shell(int d, std::int64_t r2,
                             std::uint64_t visit_limit = kDefaultVisitLimit);

// Exact rational constants (c(d), delta(d)) of the cluster recursion.
struct RecursionConstants {
  Rational c;
  Rational delta;
};

RecursionConstants recursion_constants(int d, const Rational& delta2);

// dist <= rho  <=>  squared integer distance <= floor(rho^2), with rho^2
// taken exactly from the double rho.
class SeparationThreshold {
 public:
  explicit SeparationThreshold(double rho);
  double rho() const { return rho_; }
  std::int64_t floor_rho2() const { return floor_rho2_; }
  bool within(std::int64_t dist2) const { return dist2 <= floor_rho2_; }
  bool separated(std::int64_t dist2) const { return dist2 > floor_rho2_; }

 private:
  double rho_;
  std::int64_t floor_rho2_;
};

struct ClusterParams {
  Rational delta2{1, 4};
  double rho = 1.0;

  RecursionConstants constants(int d) const { return recursion_constants(d, delta2); }
};

struct ClusterDecomposition {
  std::vector<IndexSet> clusters;
  double rho = 0.0;
  std::vector<double> diameters;
  // +infinity when there is a single cluster.
  double min_intercluster_distance = 0.0;
  // Whether rho < R^{delta(d)} holds; the decomposition is built regardless.
  bool hypothesis_holds = false;
  RecursionConstants constants;
};

IndexSet cap_points(const LatticeShell& shell, const RealVec& center, double euclidean_radius);

// Dimension of the affine span, by exact integer elimination.
int affine_rank(const std::vector<LatticePoint>& points);

struct JarnikViolation {
  std::size_t center_index = 0;
  IndexSet members;
  int affine_rank = 0;
};

struct JarnikReport {
  double cap_radius = 0.0;
  std::size_t caps_checked = 0;
  std::vector<JarnikViolation> violations;
  // d == 2 only: caps holding three or more non-collinear points.
  std::vector<JarnikViolation> noncollinear_triples;
};

JarnikReport jarnik_scan(const LatticeShell& shell, double cap_radius);

// Fixed point of F_i = F u {x : dist(x, F_{i-1}) <= rho}, restricted to the
// indices in `universe` (all of the shell when empty).
IndexSet grow_overset(const LatticeShell& shell, const IndexSet& seed, double rho,
                      const std::optional<IndexSet>& universe = std::nullopt);

ClusterDecomposition cluster_decompose(const LatticeShell& shell, const ClusterParams& params);

// Same greedy decomposition restricted to a subset of the shell (used by the
// restriction certificate); cluster entries are shell indices.
ClusterDecomposition cluster_decompose(const LatticeShell& shell, const IndexSet& subset,
                                       const ClusterParams& params);

// Connected components of the graph with edges dist <= rho.
std::vector<IndexSet> proximity_components(const LatticeShell& shell, double rho);

// Largest eccentricity over the rho-proximity graph (graph-metric diameter of
// the widest component). A lower bound for the longest rho-chain.
int max_chain_length(const LatticeShell& shell, double rho);

}  // namespace toral
