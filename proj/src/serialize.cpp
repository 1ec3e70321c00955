#include "toral/serialize.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "toral/errors.hpp"

namespace toral {

std::string format_double(double x) {
  if (!std::isfinite(x)) return std::isnan(x) ? "nan" : (x > 0 ? "inf" : "-inf");
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

Json to_json(const LatticePoint& p) { return Json(p.coords()); }

LatticePoint lattice_point_from_json(const Json& j) {
  if (!j.is_array()) throw ValidationError("lattice point must be an array of integers");
  std::vector<std::int64_t> c;
  for (const auto& e : j) {
    if (!e.is_number_integer()) throw ValidationError("lattice point must be an array of integers");
    c.push_back(e.get<std::int64_t>());
  }
  return LatticePoint(std::move(c));
}

namespace {

Json finite_or_null(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

Json index_sets(const std::vector<IndexSet>& sets) {
  Json out = Json::array();
  for (const auto& s : sets) out.push_back(Json(s));
  return out;
}

Json points_json(const std::vector<LatticePoint>& pts) {
  Json out = Json::array();
  for (const auto& p : pts) out.push_back(to_json(p));
  return out;
}

Json vec_json(const RealVec& v) { return Json(v); }

}  // namespace

Json shell_json(const LatticeShell& shell, const ClusterDecomposition* dec) {
  Json j;
  j["d"] = shell.d;
  j["r2"] = shell.r2;
  j["points"] = points_json(shell.points);
  if (dec) {
    j["clusters"] = index_sets(dec->clusters);
    j["rho"] = dec->rho;
    j["constants"] = {{"c", to_string(dec->constants.c)}, {"delta", to_string(dec->constants.delta)}};
    j["diameters"] = dec->diameters;
    j["min_intercluster_distance"] = finite_or_null(dec->min_intercluster_distance);
    j["hypothesis_holds"] = dec->hypothesis_holds;
  } else {
    j["clusters"] = Json::array();
    j["rho"] = nullptr;
    j["constants"] = nullptr;
  }
  return j;
}

Json jarnik_json(const LatticeShell& shell, const JarnikReport& r) {
  auto viol = [&](const std::vector<JarnikViolation>& vs) {
    Json out = Json::array();
    for (const auto& v : vs) {
      out.push_back({{"center", to_json(shell.points[v.center_index])},
                     {"members", v.members},
                     {"affine_rank", v.affine_rank}});
    }
    return out;
  };
  return {{"d", shell.d},
          {"r2", shell.r2},
          {"points", shell.size()},
          {"cap_radius", r.cap_radius},
          {"caps_checked", r.caps_checked},
          {"violations", viol(r.violations)},
          {"noncollinear_triples", viol(r.noncollinear_triples)}};
}

Json eigenfunction_json(const Eigenfunction& phi) {
  Json coeffs = Json::array();
  for (const auto& [xi, a] : phi.coeffs()) coeffs.push_back({{"xi", to_json(xi)}, {"re", a.real()}, {"im", a.imag()}});
  return {{"d", phi.d()}, {"r2", phi.r2()}, {"coeffs", coeffs}};
}

Eigenfunction eigenfunction_from_json(const Json& j) {
  try {
    const int d = j.at("d").get<int>();
    const auto r2 = j.at("r2").get<std::int64_t>();
    Eigenfunction::CoeffMap coeffs;
    for (const auto& c : j.at("coeffs")) {
      auto xi = lattice_point_from_json(c.at("xi"));
      const double re = c.contains("re") ? c.at("re").get<double>() : 0.0;
      const double im = c.contains("im") ? c.at("im").get<double>() : 0.0;
      if (!coeffs.emplace(std::move(xi), cplx(re, im)).second) throw ValidationError("duplicate frequency in coeffs");
    }
    Eigenfunction phi(d, r2, std::move(coeffs));
    const bool real = phi.has_conjugate_symmetry();
    return real ? Eigenfunction(d, r2, phi.coeffs(), true) : phi;
  } catch (const Json::exception& e) {
    throw ValidationError(std::string("malformed eigenfunction JSON: ") + e.what());
  }
}

Json patch_json(const ComplexPatch& p) {
  Json nodes = Json::array();
  for (const auto& n : p.nodes) {
    RealVec zr, zi;
    for (const auto& z : n.z) {
      zr.push_back(z.real());
      zi.push_back(z.imag());
    }
    nodes.push_back({{"t", n.t},
                     {"xhat", vec_json(n.xhat)},
                     {"x1", n.x[p.solve_index]},
                     {"Z_re", zr},
                     {"Z_im", zi},
                     {"w", n.weight}});
  }
  return {{"v", vec_json(p.v)},
          {"tau", p.tau},
          {"solve_index", p.solve_index},
          {"tangency", vec_json(p.tangency)},
          {"degenerate", p.degenerate},
          {"nodes", nodes}};
}

namespace {

Json node_json(const CertificateNode& n) {
  Json children = Json::array();
  for (const auto& c : n.children) children.push_back(node_json(c));
  return {{"frequencies", points_json(n.frequencies)},
          {"rho", n.rho},
          {"leaf", n.leaf},
          {"constant", n.constant},
          {"best_delta", n.best_delta},
          {"diagonal", n.diagonal},
          {"children", children}};
}

void report_node(std::ostringstream& os, const CertificateNode& n, int depth) {
  os << std::string(2 * depth, ' ') << (n.leaf ? "leaf" : "node") << " size=" << n.frequencies.size();
  if (!n.leaf) os << " rho=" << format_double(n.rho);
  os << " C=" << format_double(n.constant) << " diag=" << format_double(n.diagonal);
  if (n.leaf && n.frequencies.size() == 2) os << " delta=" << format_double(n.best_delta);
  os << '\n';
  for (const auto& c : n.children) report_node(os, c, depth + 1);
}

}  // namespace

Json certificate_json(const Certificate& c) {
  Json off = Json::array();
  for (const auto& e : c.offdiag) off.push_back({{"xi", to_json(e.xi)}, {"xi_prime", to_json(e.xi_prime)}, {"magnitude", e.magnitude}});
  return {{"diagonal_sum", c.diagonal_sum},
          {"offdiag_bound", c.offdiag_bound},
          {"tail_cross", c.tail_cross},
          {"constant", c.constant},
          {"verdict", c.verdict},
          {"cutoff", c.cutoff},
          {"tau", c.tau},
          {"short_count", c.short_count},
          {"tree", node_json(c.tree)},
          {"offdiag", off}};
}

std::string certificate_report(const Certificate& c) {
  std::ostringstream os;
  os << "short support: " << c.short_count << " frequencies with A < " << format_double(c.cutoff) << '\n';
  os << "constant C = " << format_double(c.constant) << '\n';
  os << "diagonal sum = " << format_double(c.diagonal_sum) << '\n';
  os << "off-diagonal bound = " << format_double(c.offdiag_bound) << " (tail cross " << format_double(c.tail_cross)
     << ", " << c.offdiag.size() << " cross-leaf pairs)\n";
  os << "verdict = " << format_double(c.verdict) << (c.verdict > 0 ? "  (positive lower bound)" : "  (inconclusive)")
     << '\n';
  os << "cluster tree:\n";
  report_node(os, c.tree, 1);
  return os.str();
}

Json laurent_json(const LaurentPoly2& l) {
  auto terms = [](const std::map<LaurentPoly2::Exponent, cplx>& m) {
    Json out = Json::array();
    for (const auto& [e, a] : m) out.push_back({{"n", {e.first, e.second}}, {"re", a.real()}, {"im", a.imag()}});
    return out;
  };
  return {{"terms", terms(l.terms)},
          {"shifts", {l.shifts.first, l.shifts.second}},
          {"shifted_terms", terms(l.shifted_terms())},
          {"z1_divides_p", l.z1_divides_p()},
          {"z2_divides_p", l.z2_divides_p()}};
}

Json frequency_box_json(const FrequencyBoxReport& r) {
  return {{"frequencies", r.frequencies}, {"max_offset", r.max_offset}, {"abc", r.abc},
          {"bound", r.bound},             {"passed", r.passed},         {"note", r.note}};
}

Json cap_propagation_json(const CapPropagation& c) {
  Json steps = Json::array();
  for (const auto& s : c.steps) {
    steps.push_back({{"center", vec_json(s.cap.center)},
                     {"angle", s.cap.angle},
                     {"epsilon", s.epsilon},
                     {"probes", s.probes},
                     {"probe_failures", s.probe_failures}});
  }
  return {{"epsilon_d", c.epsilon_d}, {"iterations", c.iterations}, {"full_sphere", c.full_sphere}, {"steps", steps}};
}

std::string gcd_table_csv(int max_n) {
  if (max_n < 2) throw ValidationError("gcd table needs max_n >= 2");
  std::ostringstream os;
  os << "m,n,gcd\n";
  for (int n = 2; n <= max_n; ++n)
    for (int m = 1; m < n; ++m) os << m << ',' << n << ',' << common_roots(m, n).str() << '\n';
  return os.str();
}

std::string parallels_csv(int n) {
  const auto roots = legendre_roots(n);
  const auto par = zonal_parallels(n);
  std::ostringstream os;
  os << "k,x,theta\n";
  // parallels are ascending in theta, roots ascending in x
  for (std::size_t k = 0; k < par.size(); ++k)
    os << k << ',' << format_double(roots[roots.size() - 1 - k]) << ',' << format_double(par[k]) << '\n';
  return os.str();
}

}  // namespace toral
