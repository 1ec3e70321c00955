#pragma once

#include <cstdint>
#include <vector>

#include "toral/numeric.hpp"

namespace toral {

// Spherical cap of directions within `angle` of a unit center.
struct Cap {
  RealVec center;
  double angle = 0.0;

  Cap() = default;
  // Center is renormalized after checking |center| = 1 to 1e-9.
  Cap(RealVec center, double angle);

  // <y/|y|, center> >= cos(angle) - slack.
  bool contains(const RealVec& y, double slack = 0.0) const;
  double angle_to(const RealVec& y) const;
  int dim() const { return static_cast<int>(center.size()); }
};

// Angle between two nonzero vectors, computed stably with atan2.
double vector_angle(const RealVec& a, const RealVec& b);

// Unit vector at angle `angle` from `center` towards the unit vector `dir`
// (dir is orthogonalized against center first).
RealVec rotate_towards(const RealVec& center, const RealVec& dir, double angle);

// n directions in the cap, seeded. In d = 2 they are evenly spaced along the
// arc including both endpoints; otherwise uniform by area, with the first
// quarter placed on the boundary circle.
std::vector<RealVec> sample_cap(const Cap& cap, int n, std::uint64_t seed);

// n seeded uniform directions on S^{d-1}.
std::vector<RealVec> sample_sphere(int d, int n, std::uint64_t seed);

}  // namespace toral
