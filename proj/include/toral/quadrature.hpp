#pragma once

#include <vector>

namespace toral {

struct GaussRule {
  std::vector<double> nodes;    // ascending, in (-1, 1)
  std::vector<double> weights;  // sum to 2
};

// n-point Gauss-Legendre rule; results are cached per n.
const GaussRule& gauss_legendre(int n);

// The rule mapped affinely onto (a, b).
GaussRule gauss_legendre(int n, double a, double b);

}  // namespace toral
