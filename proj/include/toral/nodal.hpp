#pragma once

// Nodal lines of planar eigenfunctions: grid evaluation on [0,1]^2 and
// marching squares with linear interpolation, joined into polylines.

#include <string>
#include <vector>

#include "toral/eigenfun.hpp"

namespace toral {

enum class NodalPart { Real, Imag };

struct NodalGrid {
  int n = 0;                   // cells per side; values on (n + 1)^2 vertices
  std::vector<double> values;  // row-major, values[j * (n + 1) + i] at (i / n, j / n)
  double max_gradient = 0.0;   // largest finite-difference gradient over the cells

  double at(int i, int j) const { return values[static_cast<std::size_t>(j) * (n + 1) + i]; }
  double cell() const { return 1.0 / n; }
};

NodalGrid evaluate_grid(const Eigenfunction& phi, int n, NodalPart part = NodalPart::Real);

struct NodalContours {
  NodalGrid grid;
  std::vector<std::vector<RealVec>> polylines;  // closed loops repeat their first vertex

  std::size_t vertex_count() const;
  // polyline,vertex,x,y
  std::string csv() const;
  std::string svg(int pixels = 512) const;
};

// Vertices on a grid value that is exactly zero are taken as nonpositive, so
// a zero row produces one line, not two.
NodalContours marching_squares(const NodalGrid& grid);
NodalContours nodal_contours(const Eigenfunction& phi, int n = 512, NodalPart part = NodalPart::Real);

}  // namespace toral
