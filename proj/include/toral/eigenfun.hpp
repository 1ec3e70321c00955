#pragma once

// Toral eigenfunctions as sparse trigonometric sums over a lattice shell,
// their holomorphic extension, and the shifted short sums used on complex
// patches.

#include <cstdint>
#include <map>
#include <vector>

#include "toral/lattice.hpp"
#include "toral/numeric.hpp"

namespace toral {

inline constexpr double kDefaultImagBound = 10.0;

class Eigenfunction {
 public:
  using CoeffMap = std::map<LatticePoint, cplx>;

  // Validates that every key lies on the sphere |xi|^2 == r2. Coefficients
  // are stored as given; call normalized() for unit l2 mass.
  Eigenfunction(int d, std::int64_t r2, CoeffMap coeffs, bool real_valued = false);

  int d() const { return d_; }
  std::int64_t r2() const { return r2_; }
  double lambda() const;
  const CoeffMap& coeffs() const { return coeffs_; }
  std::size_t support_size() const { return coeffs_.size(); }
  bool real_valued() const { return real_valued_; }
  cplx coeff(const LatticePoint& xi) const;

  double l2_mass() const;  // sum |a_xi|^2
  Eigenfunction normalized() const;
  // Checks a_{-xi} == conj(a_xi) for every xi.
  bool has_conjugate_symmetry(double tol = 1e-12) const;

  cplx evaluate(const RealVec& x) const;
  std::vector<cplx> evaluate_many(const std::vector<RealVec>& xs) const;
  cplx evaluate_complex(const ComplexVec& z, double imag_bound = kDefaultImagBound) const;

  // Relabels coordinates: new coordinate i is old coordinate perm[i].
  Eigenfunction permute(const std::vector<int>& perm) const;

 private:
  int d_;
  std::int64_t r2_;
  CoeffMap coeffs_;
  bool real_valued_;
};

// Complex Gaussian coefficients on every point of the shell, normalized.
// With real_valued the pairs +-xi are conjugate.
Eigenfunction random_eigenfunction(const LatticeShell& shell, std::uint64_t seed,
                                   bool real_valued = false);

struct ShiftFrame {
  LatticePoint xi0;
  std::int64_t r2 = 0;
  RealVec v0;  // -xi0 / |xi0|

  static ShiftFrame from(const LatticePoint& xi0);
  double lambda() const;
};

// A(xi) = <xi - xi0, v0> = (r2 - <xi, xi0>) / lambda, exact up to the final
// division. Rejects xi off the shell of xi0.
double shift_height(const ShiftFrame& frame, const LatticePoint& xi);

// ceil(multiplier * (log lambda)^2).
double default_cutoff(double lambda, double multiplier = 1.0);

struct ShortSupport {
  std::vector<LatticePoint> frequencies;  // A(xi) < D, sorted
  double cutoff = 0.0;
  double cap_radius = 0.0;            // max |xi - xi0| over the set
  double predicted_cap_radius = 0.0;  // sqrt(2 lambda D)
};

ShortSupport short_support(const Eigenfunction& phi, const ShiftFrame& frame, double cutoff);

// (#E)^{1/2} e^{-2 pi tau D}, scaled by the l2 mass of the coefficients.
double short_sum_tail_bound(std::size_t count, double tau, double cutoff, double l2_mass = 1.0);

// phi^C(Z) e^{-2 pi i <xi0, Z>}, summed term by term so nothing overflows.
cplx shifted_value(const Eigenfunction& phi, const ShiftFrame& frame, const ComplexVec& z);

struct ShortSum {
  cplx value;
  double tail_bound = 0.0;
  double t = 0.0;
  std::size_t terms = 0;
};

// Requires Im Z = t v0 with tau < t < 2 tau (tolerance 1e-9).
ShortSum short_sum_with_tail(const Eigenfunction& phi, const ShiftFrame& frame,
                             const ComplexVec& z, double tau, double cutoff);

// sqrt(2) sin 2 pi n (<xi, x> - c).
Eigenfunction make_geodesic_vanisher(const LatticePoint& xi, double c, int n);

// phi0(x, y) cos 2 pi n z on T^3, renormalized.
Eigenfunction make_cylinder(const Eigenfunction& phi0, int n);

struct LineFamily {
  LatticePoint normal;  // xi - xi'
  double alpha = 0.0;

  // Distance of <normal, x> - alpha to the nearest integer.
  double offset_residual(const RealVec& x) const;
};

LineFamily two_frequency_nodal(const LatticePoint& xi, const LatticePoint& xi_prime, double alpha);

// e^{2 pi i <xi, x>} - e^{2 pi i alpha} e^{2 pi i <xi', x>}, unnormalized.
Eigenfunction two_frequency_function(const LatticePoint& xi, const LatticePoint& xi_prime,
                                     double alpha);

}  // namespace toral
