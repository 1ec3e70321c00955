#pragma once

// Oscillatory integrals over complex patches (J_{xi,xi'}), their decay in
// |xi - xi'|, and Fourier transforms of Gauss-map pullback measures.

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "toral/eigenfun.hpp"
#include "toral/lattice.hpp"
#include "toral/surface.hpp"

namespace toral {

// Throws MismatchedFrame unless patch.v == frame.v0 to 1e-9.
void check_frame(const ComplexPatch& patch, const ShiftFrame& frame);

struct JValue {
  cplx direct;    // e^{2 pi i(<xi - xi0, Z> - <xi' - xi0, conj Z>)} summed with the node weights
  cplx factored;  // e^{2 pi i |xi - xi'| Phi} e^{-2 pi t (A(xi) + A(xi'))} psi
  double relative_difference = 0.0;
  double l1 = 0.0;  // integral of |integrand|
};

JValue j_integral_on(const ComplexPatch& patch, const ShiftFrame& frame, const LatticePoint& xi,
                     const LatticePoint& xi_prime);

// A base patch plus rebuilt copies at other quadrature orders, built lazily.
class PatchFamily {
 public:
  explicit PatchFamily(ComplexPatch base, int max_order = 0);

  const ComplexPatch& base() const { return base_; }
  const ComplexPatch& at(int order);
  // max(20, 6 ceil(separation * diam G)), clipped to max_order.
  int order_for(double separation) const;
  int max_order() const { return max_order_; }
  int refined(int order) const;
  double phase_diameter() const { return diam_; }

 private:
  ComplexPatch base_;
  int max_order_;
  double diam_;
  std::mutex mu_;
  std::map<int, std::unique_ptr<ComplexPatch>> cache_;
};

struct OscillatoryResult {
  cplx value;             // direct form on the finer grid
  cplx coarse_value;
  cplx factored_value;    // factored form on the finer grid
  double identity_error = 0.0;     // relative direct/factored difference
  double refinement_error = 0.0;   // |fine - coarse|
  double l1 = 0.0;                 // integral of |integrand|, the scale for relative errors
  LatticePoint xi, xi_prime;
  double separation = 0.0;
  int order = 0;
  int refined_order = 0;
};

// Starts at order_for(|xi - xi'|) and refines until |fine - coarse| <= tol * l1
// or the family's max order is reached.
OscillatoryResult j_integral(PatchFamily& family, const ShiftFrame& frame, const LatticePoint& xi,
                             const LatticePoint& xi_prime, double tol = 1e-7);

// min over bump-support nodes of |grad_{(t, xhat)} <u, G>|.
double phase_gradient_min(const ComplexPatch& patch, const RealVec& u);

struct DecayRow {
  LatticePoint xi, xi_prime;
  double separation = 0.0;
  double magnitude = 0.0;
  double refinement_error = 0.0;
};

struct DecayFit {
  double slope = 0.0;
  double intercept = 0.0;
  std::vector<DecayRow> rows;  // sorted by separation

  std::string csv() const;
  // Pairs of rows with strictly larger separation whose |J| exceeds the
  // smaller-separation value by more than both refinement errors plus `floor`.
  std::vector<std::pair<std::size_t, std::size_t>> monotonicity_violations(double floor = 0.0) const;
};

// Least-squares slope of log |J| against log |xi - xi'|. Requires distinct
// pairs whose separations span a factor of 4 and at least three distinct
// separations (DegenerateFit otherwise).
DecayFit decay_fit(PatchFamily& family, const ShiftFrame& frame,
                   const std::vector<std::pair<LatticePoint, LatticePoint>>& pairs);

// mu_u: surface measure on the part of the graph whose unit normal lies in
// Cap(u, delta0), weighted by the cap bump b(angle(N, u) / delta0).
struct SurfaceMeasure {
  AnalyticGraph surface;
  RealVec u;
  double delta0 = 0.0;
  RealVec center;       // parameter point with N = u
  RealVec half_widths;  // parameter box enclosing the support
  double mass = 0.0;

  double density(const RealVec& x) const;
};

// Locates the patch, checks that sampled normals never collide
// (GaussMapNotInjective) and that the support stays inside the domain.
SurfaceMeasure make_surface_measure(const AnalyticGraph& s, const RealVec& u, double delta0);

cplx surface_measure_ft(const SurfaceMeasure& mu, const RealVec& y, int order = 0);
cplx surface_measure_ft(const AnalyticGraph& s, const RealVec& u, double delta0, const RealVec& y);

struct RayDecay {
  RealVec ray;
  std::vector<double> radii;
  std::vector<double> magnitudes;
  double threshold = 0.0;  // first radius after which every doubling halves (or sits below floor)
  bool passed = false;
};

struct DecayReport {
  double floor = 0.0;  // magnitudes below this count as converged to zero
  std::vector<RayDecay> rays;
  bool all_passed = false;
};

// Every ray must lie outside Cap(u, 2 delta0) (PreconditionViolated).
DecayReport nonstationary_decay_check(const AnalyticGraph& s, const RealVec& u, double delta0,
                                      const std::vector<RealVec>& rays,
                                      const std::vector<double>& radii);

}  // namespace toral
