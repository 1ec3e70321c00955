#include <doctest.h>

#include <cmath>

#include "toral/errors.hpp"
#include "toral/nodal.hpp"

using namespace toral;

namespace {

// sin 2 pi x1 = (e(x1) - e(-x1)) / 2i
Eigenfunction sine_x1() {
  return Eigenfunction(2, 1, {{LatticePoint{1, 0}, cplx(0, -0.5)}, {LatticePoint{-1, 0}, cplx(0, 0.5)}}, true);
}

}  // namespace

TEST_CASE("vertical nodal lines of sin 2 pi x1") {
  const auto c = nodal_contours(sine_x1(), 64);
  REQUIRE(c.polylines.size() == 2);
  std::vector<double> xs;
  for (const auto& line : c.polylines) {
    double lo = 1, hi = 0, ymin = 1, ymax = 0;
    for (const auto& v : line) {
      lo = std::min(lo, v[0]);
      hi = std::max(hi, v[0]);
      ymin = std::min(ymin, v[1]);
      ymax = std::max(ymax, v[1]);
    }
    CHECK(hi - lo < 1e-12);
    CHECK(ymin == 0.0);
    CHECK(ymax == 1.0);
    xs.push_back(lo);
  }
  std::sort(xs.begin(), xs.end());
  CHECK(std::abs(xs[0]) < 1e-12);
  CHECK(std::abs(xs[1] - 0.5) < 1e-12);
  CHECK(c.csv().rfind("polyline,vertex,x,y\n", 0) == 0);
}

TEST_CASE("contour vertices lie near the zero set") {
  const auto shell = enumerate_shell(2, 65);
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    const auto phi = random_eigenfunction(shell, seed, true);
    const auto c = nodal_contours(phi, 128);
    CHECK(c.vertex_count() > 0);
    const double bound = 10.0 * c.grid.cell() * c.grid.max_gradient;
    double worst = 0.0;
    for (const auto& line : c.polylines)
      for (const auto& v : line) worst = std::max(worst, std::abs(phi.evaluate(v).real()));
    CHECK(worst < bound);
    // linear interpolation error is second order in the cell size
    CHECK(worst < 0.05 * bound);
  }
}

TEST_CASE("closed loops and saddles") {
  // cos 2 pi x + cos 2 pi y: nodal set is the square |x - 1/2| + |y - 1/2| = 1/2 (mod 1),
  // with saddles at the corners (0, 1/2), (1/2, 0)...
  Eigenfunction f(2, 1,
                  {{LatticePoint{1, 0}, cplx(0.5, 0)},
                   {LatticePoint{-1, 0}, cplx(0.5, 0)},
                   {LatticePoint{0, 1}, cplx(0.5, 0)},
                   {LatticePoint{0, -1}, cplx(0.5, 0)}},
                  true);
  const auto c = nodal_contours(f, 50);
  for (const auto& line : c.polylines)
    for (const auto& v : line) {
      const double r = std::abs(std::abs(v[0] - 0.5) + std::abs(v[1] - 0.5) - 0.5);
      CHECK(r < 0.03);
    }
  // Circles of cos 2 pi x cos 2 pi y + 0.5 around (0.5, 0) style centers close up.
  Eigenfunction g(2, 2,
                  {{LatticePoint{1, 1}, cplx(0.25, 0)},
                   {LatticePoint{-1, -1}, cplx(0.25, 0)},
                   {LatticePoint{1, -1}, cplx(0.25, 0)},
                   {LatticePoint{-1, 1}, cplx(0.25, 0)}},
                  true);
  const auto cg = nodal_contours(g, 40);
  CHECK(cg.polylines.size() >= 4);
  const auto svg = cg.svg(256);
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("</svg>") != std::string::npos);
  CHECK_THROWS_AS(nodal_contours(Eigenfunction(3, 1, {{LatticePoint{1, 0, 0}, cplx(1, 0)}}), 8), ValidationError);
}
