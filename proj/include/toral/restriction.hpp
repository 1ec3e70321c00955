#pragma once

// Mean squares on complex patches, the cluster-tree lower bound for them,
// real restriction integrals, and the reflection/cap geometry used to spread
// vanishing of Fourier coefficients over the sphere.

#include <cstdint>
#include <optional>
#include <vector>

#include "toral/cap.hpp"
#include "toral/eigenfun.hpp"
#include "toral/lattice.hpp"
#include "toral/oscillatory.hpp"
#include "toral/surface.hpp"

namespace toral {

// Sum over nodes of w |phi^C(Z) e^{-2 pi i <xi0, Z>}|^2.
double mean_square(const ComplexPatch& patch, const Eigenfunction& phi, const ShiftFrame& frame);

// Quadrature sample of a curve or surface in R^d with arclength/area weights.
struct RestrictionSample {
  std::vector<RealVec> points;
  std::vector<double> weights;
};

RestrictionSample segment_sample(const RealVec& a, const RealVec& b, int n);
// Arc of the circle |x - center| = radius in the (x1, x2) plane.
RestrictionSample circle_arc_sample(const RealVec& center, double radius, double theta0,
                                    double theta1, int n);
// Graph of s over the box center +- half_width, n points per axis.
RestrictionSample graph_sample(const AnalyticGraph& s, const RealVec& center, double half_width, int n);

double real_restriction_norm(const RestrictionSample& sample, const Eigenfunction& phi);
double restriction_sup(const RestrictionSample& sample, const Eigenfunction& phi);

struct BaseCaseBound {
  double direct = 0.0;       // integral of |a e_xi + a' e_xi'|^2 over the patch
  double constant = 0.0;     // best delta * mass(S_delta)
  double best_delta = 0.0;
  double s_mass = 0.0;       // mass of S_delta at best_delta
  double diagonal = 0.0;     // |a|^2 e^{-8 pi tau A} + |a'|^2 e^{-8 pi tau A'}
  double bound = 0.0;        // constant * diagonal
};

// Two-frequency lower bound on the patch grid; delta swept over 0.1..0.9.
BaseCaseBound base_case_bound(const ComplexPatch& patch, const ShiftFrame& frame, const LatticePoint& xi,
                              const LatticePoint& xi_prime, cplx a, cplx a_prime);

struct CertificateNode {
  std::vector<LatticePoint> frequencies;
  double rho = 0.0;       // separation used to split this node (0 for leaves)
  bool leaf = false;
  double constant = 0.0;  // leaf constant, or min over children
  double best_delta = 0.0;  // pair leaves only
  double diagonal = 0.0;  // sum |a|^2 e^{-8 pi tau A} over the node
  std::vector<CertificateNode> children;
};

struct OffDiagonalEntry {
  LatticePoint xi, xi_prime;
  double magnitude = 0.0;  // 2 |a| |a'| |J|
};

struct Certificate {
  double diagonal_sum = 0.0;
  double offdiag_bound = 0.0;  // cross-leaf sum plus tail cross term
  double tail_cross = 0.0;
  double constant = 0.0;
  double verdict = 0.0;        // constant * diagonal_sum - offdiag_bound
  double cutoff = 0.0;
  double tau = 0.0;
  std::size_t short_count = 0;
  CertificateNode tree;
  std::vector<OffDiagonalEntry> offdiag;
};

// rho <= 0 in params means lambda^{delta(d)}.
Certificate lower_bound_certificate(const ComplexPatch& patch, const Eigenfunction& phi,
                                    const ShiftFrame& frame, const ClusterParams& params,
                                    std::optional<double> cutoff = std::nullopt);

RealVec reflect(const RealVec& u, const RealVec& x);

// Whether y = tau_u w for some u in Cap(u0, delta), decided from u = +-(w - y)/|w - y|.
bool in_reflected_set(const RealVec& u0, double delta, const RealVec& w, const RealVec& y,
                      double tol = 1e-12);

struct EpsilonEstimate {
  RealVec w1;
  double epsilon = 0.0;
};

EpsilonEstimate estimate_epsilon(int d, const RealVec& u0, double delta, const RealVec& w,
                                 int samples = 4000, int probes = 2000, std::uint64_t seed = 42);

// Minimum of epsilon over sampled w (u0 = e_1; the value does not depend on u0).
double epsilon_d(int d, double delta, int n_w = 64, std::uint64_t seed = 42);

struct CapStep {
  Cap cap;
  double epsilon = 0.0;  // measured for the previous center
  int probes = 0;
  int probe_failures = 0;
};

struct CapPropagation {
  double epsilon_d = 0.0;
  std::vector<CapStep> steps;  // steps[0] is omega0
  bool full_sphere = false;
  int iterations = 0;
};

CapPropagation cap_propagate(const Cap& omega0, const RealVec& u0, double delta1, double delta0,
                             int max_iterations = 0, int probes = 10000, std::uint64_t seed = 42);

}  // namespace toral
