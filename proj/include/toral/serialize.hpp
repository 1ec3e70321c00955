#pragma once

// JSON and CSV forms of the library objects. Exact rationals travel as
// "p/q" strings; doubles use the shortest round-trip representation, so a
// document is byte-identical across runs on the same inputs.

#include <optional>
#include <string>

#include <json.hpp>

#include "toral/classical.hpp"
#include "toral/eigenfun.hpp"
#include "toral/lattice.hpp"
#include "toral/restriction.hpp"
#include "toral/surface.hpp"

namespace toral {

using Json = nlohmann::json;

Json to_json(const LatticePoint& p);
LatticePoint lattice_point_from_json(const Json& j);

// {d, r2, points, clusters, rho, constants:{c, delta}, ...}; the cluster
// fields are empty when no decomposition is given.
Json shell_json(const LatticeShell& shell, const ClusterDecomposition* decomposition = nullptr);
Json jarnik_json(const LatticeShell& shell, const JarnikReport& report);

// {d, r2, coeffs:[{xi, re, im}]}
Json eigenfunction_json(const Eigenfunction& phi);
Eigenfunction eigenfunction_from_json(const Json& j);

// {v, tau, nodes:[{t, xhat, x1, Z_re, Z_im, w}]}; x1 is the solved coordinate.
Json patch_json(const ComplexPatch& patch);

Json certificate_json(const Certificate& cert);
std::string certificate_report(const Certificate& cert);

Json laurent_json(const LaurentPoly2& l);
Json frequency_box_json(const FrequencyBoxReport& r);

Json cap_propagation_json(const CapPropagation& c);

// m,n,gcd for 1 <= m < n <= max_n.
std::string gcd_table_csv(int max_n);
// k,x,theta for the roots of P_n.
std::string parallels_csv(int n);

// Shortest round-trip decimal form of a double ("%.17g" trimmed).
std::string format_double(double x);

}  // namespace toral
