#pragma once

// Graph hypersurfaces x -> (x, f(x)) in R^d with real-analytic f, their
// curvature, admissible direction caps, and the complexified patches on
// which Im Z = t v.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "toral/cap.hpp"
#include "toral/expr.hpp"
#include "toral/numeric.hpp"

namespace toral {

struct AnalyticGraph {
  int d = 0;  // ambient dimension; f takes d - 1 arguments
  Expr f;
  double delta = 0.3;  // domain radius

  AnalyticGraph() = default;
  AnalyticGraph(int d, Expr f, double delta = 0.3);
  static AnalyticGraph parse(int d, const std::string& f, double delta = 0.3);

  int params() const { return d - 1; }
  bool in_domain(const RealVec& x) const;
  double value(const RealVec& x) const { return f.eval(x); }
  RealVec gradient(const RealVec& x) const;
  Eigen::MatrixXd hessian(const RealVec& x) const;
  cplx value(const ComplexVec& z) const { return f.eval(z); }
  Jet<cplx> complex_jet(const ComplexVec& z) const { return f.jet(z); }
};

RealVec unit_normal(const AnalyticGraph& s, const RealVec& x);

struct CurvatureData {
  RealVec normal;
  Eigen::MatrixXd first_form;
  Eigen::MatrixXd second_form;
  Eigen::MatrixXd shape;
  RealVec principal_curvatures;  // ascending
  double gauss_kronecker = 0.0;
};

CurvatureData curvature_data(const AnalyticGraph& s, const RealVec& x);

double normal_curvature(const AnalyticGraph& s, const RealVec& x, const RealVec& omega);
bool is_asymptotic(const AnalyticGraph& s, const RealVec& x, const RealVec& omega, double tol);

// Minimal-norm Newton for grad f(x) . omega = w_d started at `start`, where
// v = (omega, w_d). Returns nullopt when Newton does not converge to 1e-13
// or leaves the domain.
std::optional<RealVec> tangency_point(const AnalyticGraph& s, const RealVec& v,
                                      const RealVec& start);

struct AdmissibleCapOptions {
  int hessian_samples = 200;
  int candidate_directions = 256;
  int test_directions = 100;
  double sample_radius = 0.5;   // fraction of delta
  double witness_radius = 0.75;  // fraction of delta
  double flat_tolerance = 1e-8;
  double min_angle = 1e-3;
  std::uint64_t seed = 42;
};

struct AdmissibleCap {
  Cap cap;
  RealVec omega_star;       // direction in parameter space maximizing the curvature floor
  double curvature_floor = 0.0;  // min |w^T D^2 f w| over samples at omega_star
  double curvature_bound = 0.0;  // what every witness satisfies
  std::vector<RealVec> directions;  // test directions v in the cap
  std::vector<RealVec> witnesses;   // tangency points, one per direction
  std::vector<double> residuals;    // |grad f . omega - w_d| at each witness
  std::vector<double> curvatures;   // |omega^T D^2 f omega| / |omega|^2 at each witness
};

AdmissibleCap find_admissible_cap(const AnalyticGraph& s, const AdmissibleCapOptions& opt = {});

// h(x, t) = Im F(x + i t omega) / t - w_d, continued by grad f . omega - w_d at t = 0.
double h_eval(const AnalyticGraph& s, const RealVec& v, const RealVec& x, double t);

struct HGradient {
  RealVec analytic;     // D^2 f(x) omega
  RealVec finite_diff;  // central differences of h(., t_probe)
  double dh_dt = 0.0;   // central difference in t at 0
  double max_discrepancy = 0.0;
};

// Throws PreconditionViolated unless |h(x, 0)| <= 1e-8.
HGradient h_gradient(const AnalyticGraph& s, const RealVec& v, const RealVec& x,
                     double t_probe = 1e-4, double step = 1e-5);

struct BumpSpec {
  double t_center = 0.0;
  double t_radius = 0.0;
  RealVec x_center;  // d - 2 entries
  double x_radius = 0.0;
  double exponent = 1.0;  // b(s) = exp(-exponent / (1 - s^2))

  double value(double t, const RealVec& xhat) const;
};

struct PatchOptions {
  int n_t = 24;
  int n_x = 24;
  double x_radius = 0.0;  // 0: delta / 2, clipped to the domain
  std::optional<RealVec> x_center;
  double bump_exponent = 1.0;
  int solve_index = -1;  // -1: argmax |(D^2 f omega)_k| at the tangency point
  double stationary_tolerance = 1e-3;
  // Flat controls: hold the solved coordinate at the tangency value and
  // skip the curvature and stationary-set checks.
  bool allow_degenerate = false;
  // Used when rebuilding at another order: keep this bump as is.
  std::optional<BumpSpec> fixed_bump;
};

struct PatchNode {
  double t = 0.0;
  RealVec xhat;                 // d - 2 entries
  RealVec x;                    // d - 1 entries, real parameter point
  ComplexVec z;                 // d entries
  RealVec g;                    // Re Z
  std::vector<RealVec> dg;      // d - 1 columns dG/dt, dG/dxhat_j
  double psi = 0.0;
  double weight = 0.0;
  double stationary_r1 = 0.0;   // <Re F'(z), omega> - w_d
  double stationary_r2 = 0.0;   // <-Im F'(z), omega>
};

struct ComplexPatch {
  AnalyticGraph surface;
  RealVec v;
  double tau = 0.0;
  int solve_index = 0;
  RealVec tangency;
  BumpSpec bump;
  PatchOptions options;
  bool degenerate = false;
  int bump_adjustments = 0;
  std::vector<PatchNode> nodes;

  int d() const { return surface.d; }
  double mass() const;                       // sum of weights, = integral of psi
  double max_defining_residual() const;      // max |Im Z - t v|
  double phase_diameter() const;             // max spread of G over weighted nodes
};

ComplexPatch build_patch(const AnalyticGraph& s, const RealVec& v, double tau,
                         const PatchOptions& opt = {});

// Same surface, direction and bump on a different grid.
ComplexPatch rebuild_patch(const ComplexPatch& p, int n_t, int n_x);

}  // namespace toral
