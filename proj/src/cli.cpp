#include "toral/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "toral/classical.hpp"
#include "toral/eigenfun.hpp"
#include "toral/errors.hpp"
#include "toral/lattice.hpp"
#include "toral/nodal.hpp"
#include "toral/oscillatory.hpp"
#include "toral/restriction.hpp"
#include "toral/serialize.hpp"
#include "toral/surface.hpp"

namespace toral {

namespace {

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, ',')) out.push_back(cur);
  return out;
}

RealVec parse_vec(const std::string& s, const char* what) {
  RealVec v;
  for (const auto& part : split_commas(s)) {
    try {
      std::size_t used = 0;
      v.push_back(std::stod(part, &used));
      if (used != part.size()) throw std::invalid_argument(part);
    } catch (const std::exception&) {
      throw ValidationError(std::string("cannot parse ") + what + " '" + s + "'");
    }
  }
  if (v.empty()) throw ValidationError(std::string("empty ") + what);
  return v;
}

LatticePoint parse_point(const std::string& s, const char* what) {
  std::vector<std::int64_t> c;
  for (const auto& part : split_commas(s)) {
    try {
      std::size_t used = 0;
      c.push_back(std::stoll(part, &used));
      if (used != part.size()) throw std::invalid_argument(part);
    } catch (const std::exception&) {
      throw ValidationError(std::string("cannot parse ") + what + " '" + s + "'");
    }
  }
  if (c.empty()) throw ValidationError(std::string("empty ") + what);
  return LatticePoint(std::move(c));
}

void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ValidationError("cannot write " + path);
  f << text;
}

Json read_json_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ValidationError("cannot read " + path);
  try {
    return Json::parse(f);
  } catch (const Json::exception& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

// Shared eigenfunction source: a JSON file, or seeded random coefficients on
// a shell.
struct PhiSource {
  std::string input;
  int d = 2;
  std::int64_t r2 = 0;
  std::uint64_t seed = 42;
  bool real = false;

  void add(CLI::App* app, bool real_default) {
    real = real_default;
    app->add_option("-i,--input", input, "eigenfunction JSON {d, r2, coeffs}");
    app->add_option("-d,--dim", d, "dimension")->capture_default_str();
    app->add_option("--r2", r2, "squared radius of the shell");
    app->add_option("--seed", seed, "seed for random coefficients")->capture_default_str();
    app->add_flag("--real,!--complex", real, "real-valued random coefficients")->capture_default_str();
  }

  Eigenfunction load() const {
    if (!input.empty()) return eigenfunction_from_json(read_json_file(input));
    if (r2 <= 0) throw ValidationError("give --input or a positive --r2");
    return random_eigenfunction(enumerate_shell(d, r2), seed, real);
  }
};

// --- subcommands ---------------------------------------------------------

struct ShellCmd {
  int d = 2;
  std::int64_t r2 = 0;
  bool json = false;
  std::uint64_t visit_limit = kDefaultVisitLimit;
  std::string output;

  void add(CLI::App* app) {
    app->add_option("-d,--dim", d, "dimension")->capture_default_str();
    app->add_option("--r2", r2, "squared radius")->required();
    app->add_flag("--json", json, "emit the shell as JSON");
    app->add_option("--visit-limit", visit_limit, "candidate visit cap")->capture_default_str();
    app->add_option("-o,--output", output, "output path (stdout if omitted)");
  }

  void exec(std::ostream& out) const {
    const auto shell = enumerate_shell(d, r2, visit_limit);
    if (json) {
      emit(output, shell_json(shell).dump(2) + "\n", out);
      return;
    }
    std::ostringstream os;
    std::size_t antipodal = 0;
    for (const auto& p : shell.points)
      if (std::binary_search(shell.points.begin(), shell.points.end(), -p)) ++antipodal;
    os << "# d=" << d << " r2=" << r2 << " points=" << shell.size() << " radius=" << format_double(shell.radius())
       << " antipodal_pairs=" << antipodal / 2 << '\n';
    for (const auto& p : shell.points) {
      for (std::size_t i = 0; i < p.dim(); ++i) os << (i ? "," : "") << p[i];
      os << '\n';
    }
    emit(output, os.str(), out);
  }
};

struct ClustersCmd {
  int d = 2;
  std::int64_t r2 = 0;
  double rho = 0.0;
  std::string delta2 = "1/4";
  std::string output;

  void add(CLI::App* app) {
    app->add_option("-d,--dim", d, "dimension")->capture_default_str();
    app->add_option("--r2", r2, "squared radius")->required();
    app->add_option("--rho", rho, "separation scale")->required();
    app->add_option("--delta2", delta2, "delta(2) as an exact rational")->capture_default_str();
    app->add_option("-o,--output", output, "output path");
  }

  void exec(std::ostream& out) const {
    if (!(rho > 0)) throw ValidationError("--rho must be positive");
    const auto shell = enumerate_shell(d, r2);
    ClusterParams p;
    p.delta2 = parse_rational(delta2);
    p.rho = rho;
    const auto dec = cluster_decompose(shell, p);
    emit(output, shell_json(shell, &dec).dump(2) + "\n", out);
  }
};

struct JarnikCmd {
  int d = 2;
  std::vector<std::int64_t> r2s;
  std::int64_t r2_max = 1'000'000;
  int samples = 200;
  double factor = 0.5;
  std::uint64_t seed = 42;
  std::string output;

  void add(CLI::App* app) {
    app->add_option("-d,--dim", d, "dimension")->capture_default_str();
    app->add_option("--r2", r2s, "explicit squared radii (skips sampling)");
    app->add_option("--r2-max", r2_max, "largest sampled r2")->capture_default_str();
    app->add_option("--samples", samples, "number of sampled non-empty shells")->capture_default_str();
    app->add_option("--factor", factor, "cap radius = factor * r2^(1/(2(d+1)))")->capture_default_str();
    app->add_option("--seed", seed, "sampling seed")->capture_default_str();
    app->add_option("-o,--output", output, "output path");
  }

  void exec(std::ostream& out, std::ostream& err) const {
    if (samples < 1 || r2_max < 1 || !(factor > 0)) throw ValidationError("jarnik: bad sampling parameters");
    std::vector<std::int64_t> list = r2s;
    if (list.empty()) {
      std::mt19937_64 rng(seed);
      std::uniform_int_distribution<std::int64_t> u(1, r2_max);
      std::set<std::int64_t> seen;
      int attempts = 0;
      while (static_cast<int>(list.size()) < samples) {
        if (++attempts > 1000 * samples) throw NumericalError("jarnik: too few non-empty shells in range");
        const auto r2 = u(rng);
        if (seen.count(r2) || enumerate_shell(d, r2).size() == 0) continue;
        seen.insert(r2);
        list.push_back(r2);
      }
    }
    std::ostringstream os;
    os << "r2,points,cap_radius,caps_checked,violations,noncollinear_triples\n";
    std::size_t total = 0;
    for (auto r2 : list) {
      const auto shell = enumerate_shell(d, r2);
      const double radius = factor * std::pow(static_cast<double>(r2), 1.0 / (2.0 * (d + 1)));
      const auto rep = jarnik_scan(shell, radius);
      total += rep.violations.size();
      os << r2 << ',' << shell.size() << ',' << format_double(radius) << ',' << rep.caps_checked << ','
         << rep.violations.size() << ',' << rep.noncollinear_triples.size() << '\n';
    }
    emit(output, os.str(), out);
    err << "jarnik: " << list.size() << " shells, " << total << " violations\n";
  }
};

struct NodalCmd {
  PhiSource phi;
  int n = 512;
  std::string part = "re";
  std::string output, svg;

  void add(CLI::App* app) {
    phi.add(app, true);
    app->add_option("-n,--grid", n, "cells per side")->capture_default_str();
    app->add_option("--part", part, "re or im")->check(CLI::IsMember({"re", "im"}))->capture_default_str();
    app->add_option("-o,--output", output, "contour CSV path");
    app->add_option("--svg", svg, "also write an SVG plot");
  }

  void exec(std::ostream& out, std::ostream& err) const {
    const auto f = phi.load();
    const auto c = nodal_contours(f, n, part == "re" ? NodalPart::Real : NodalPart::Imag);
    emit(output, c.csv(), out);
    if (!svg.empty()) emit(svg, c.svg(), out);
    err << "nodal: " << c.polylines.size() << " polylines, " << c.vertex_count() << " vertices\n";
  }
};

struct RestrictCmd {
  PhiSource phi;
  int samples = 2048;
  std::string f = "0.5*x1^2";
  double half_width = 0.25;
  double radius = 0.25;
  std::string output;

  void add(CLI::App* app) {
    phi.add(app, true);
    app->add_option("--samples", samples, "quadrature points per curve")->capture_default_str();
    app->add_option("--f", f, "graph expression for the curved sample")->capture_default_str();
    app->add_option("--half-width", half_width, "graph half width")->capture_default_str();
    app->add_option("--radius", radius, "circle radius")->capture_default_str();
    app->add_option("-o,--output", output, "output path");
  }

  void exec(std::ostream& out) const {
    const auto e = phi.load();
    std::ostringstream os;
    os << "curve,l2_norm,sup,l2_over_mass\n";
    const double mass = std::sqrt(e.l2_mass());
    auto row = [&](const char* name, const RestrictionSample& s) {
      const double l2 = real_restriction_norm(s, e);
      os << name << ',' << format_double(l2) << ',' << format_double(restriction_sup(s, e)) << ','
         << format_double(mass > 0 ? l2 / mass : 0.0) << '\n';
    };
    if (e.d() == 2) {
      row("geodesic", segment_sample({0.0, 0.3}, {1.0, 0.3}, samples));
      row("diagonal", segment_sample({0.0, 0.1}, {1.0, 1.1}, samples));
      row("circle", circle_arc_sample({0.5, 0.5}, radius, 0.0, kTwoPi, samples));
    }
    const auto g = AnalyticGraph::parse(e.d(), f, std::max(0.3, half_width * 1.5));
    const int per_axis = e.d() == 2 ? samples : std::max(8, static_cast<int>(std::sqrt(samples)));
    row("graph", graph_sample(g, RealVec(e.d() - 1, 0.0), half_width, per_axis));
    emit(output, os.str(), out);
  }
};

struct PatchArgs {
  int d = 2;
  std::string f;
  double domain = 0.3;
  std::string xi0;
  double tau = 0.05;
  int nt = 24, nx = 24;
  bool allow_degenerate = false;

  void add(CLI::App* app) {
    app->add_option("-d,--dim", d, "dimension")->capture_default_str();
    app->add_option("--f", f, "graph expression (default 0.5*|x|^2)");
    app->add_option("--domain", domain, "domain radius of the graph")->capture_default_str();
    app->add_option("--xi0", xi0, "base frequency, comma separated (default 74,7 in d=2)");
    app->add_option("--tau", tau, "patch thickness")->capture_default_str();
    app->add_option("--nt", nt, "quadrature order in t")->capture_default_str();
    app->add_option("--nx", nx, "quadrature order per xhat axis")->capture_default_str();
    app->add_flag("--allow-degenerate", allow_degenerate, "flat control surfaces");
  }

  LatticePoint base() const {
    if (!xi0.empty()) return parse_point(xi0, "--xi0");
    if (d == 2) return LatticePoint{74, 7};
    if (d == 3) return LatticePoint{4, 2, 1};
    throw ValidationError("give --xi0 for d > 3");
  }

  ComplexPatch build(const ShiftFrame& frame) const {
    if (static_cast<int>(frame.xi0.dim()) != d) throw ValidationError("--xi0 has the wrong dimension");
    std::string expr = f;
    if (expr.empty()) {
      expr = "0.5*(x1^2";
      for (int i = 2; i < d; ++i) expr += " + x" + std::to_string(i) + "^2";
      expr += ")";
    }
    PatchOptions opt;
    opt.n_t = nt;
    opt.n_x = nx;
    opt.allow_degenerate = allow_degenerate;
    return build_patch(AnalyticGraph::parse(d, expr, domain), frame.v0, tau, opt);
  }
};

struct MeanSquareCmd {
  PatchArgs patch;
  std::string input;
  std::uint64_t seed = 42;
  bool real = false;
  double rho = 0.0;
  std::string delta2 = "1/4";
  double cutoff = 0.0;
  double d_multiplier = 1.0;
  std::string json, patch_out, output;

  void add(CLI::App* app) {
    patch.add(app);
    app->add_option("-i,--input", input, "eigenfunction JSON on the shell of xi0");
    app->add_option("--seed", seed, "seed for random coefficients")->capture_default_str();
    app->add_flag("--real", real, "real-valued random coefficients");
    app->add_option("--rho", rho, "certificate clustering scale (0: lambda^delta(d))")->capture_default_str();
    app->add_option("--delta2", delta2, "delta(2) as an exact rational")->capture_default_str();
    app->add_option("--cutoff", cutoff, "short-sum cutoff D (0: from --D-multiplier)")->capture_default_str();
    app->add_option("--D-multiplier", d_multiplier, "D = ceil(m (log lambda)^2)")->capture_default_str();
    app->add_option("--json", json, "write the certificate JSON here");
    app->add_option("--patch", patch_out, "write the patch JSON here");
    app->add_option("-o,--output", output, "text report path");
  }

  void exec(std::ostream& out) const {
    const auto xi0 = patch.base();
    const auto frame = ShiftFrame::from(xi0);
    Eigenfunction phi = !input.empty() ? eigenfunction_from_json(read_json_file(input))
                                       : random_eigenfunction(enumerate_shell(patch.d, xi0.norm2()), seed, real);
    const auto p = patch.build(frame);
    ClusterParams params;
    params.rho = rho;
    params.delta2 = parse_rational(delta2);
    const double d_cut = cutoff > 0 ? cutoff : default_cutoff(frame.lambda(), d_multiplier);
    const double ms = mean_square(p, phi, frame);
    const auto cert = lower_bound_certificate(p, phi, frame, params, d_cut);
    std::ostringstream os;
    os << "mean square = " << format_double(ms) << '\n';
    os << "patch mass = " << format_double(p.mass()) << ", max |Im Z - t v| = " << format_double(p.max_defining_residual())
       << '\n';
    os << certificate_report(cert);
    os << (ms >= cert.verdict ? "sound: mean square >= verdict\n" : "UNSOUND: mean square < verdict\n");
    emit(output, os.str(), out);
    if (!json.empty()) emit(json, certificate_json(cert).dump(2) + "\n", out);
    if (!patch_out.empty()) emit(patch_out, patch_json(p).dump(2) + "\n", out);
  }
};

struct OscDecayCmd {
  PatchArgs patch;
  double max_sep = 40.0;
  int max_order = 0;
  std::string output;

  void add(CLI::App* app) {
    patch.add(app);
    app->add_option("--max-sep", max_sep, "largest |xi - xi0| used")->capture_default_str();
    app->add_option("--max-order", max_order, "quadrature order cap (0: automatic)")->capture_default_str();
    app->add_option("-o,--output", output, "CSV path");
  }

  void exec(std::ostream& out, std::ostream& err) const {
    const auto xi0 = patch.base();
    const auto frame = ShiftFrame::from(xi0);
    const auto shell = enumerate_shell(patch.d, xi0.norm2());
    std::vector<std::pair<LatticePoint, LatticePoint>> pairs;
    for (const auto& xi : shell.points) {
      const double sep = std::sqrt(static_cast<double>(distance2(xi, xi0)));
      if (xi != xi0 && sep <= max_sep) pairs.emplace_back(xi, xi0);
    }
    PatchFamily fam(patch.build(frame), max_order);
    const auto fit = decay_fit(fam, frame, pairs);
    emit(output, fit.csv(), out);
    err << "oscdecay: " << fit.rows.size() << " pairs, slope " << format_double(fit.slope) << ", "
        << fit.monotonicity_violations().size() << " monotonicity violations\n";
  }
};

struct CapFlowCmd {
  int d = 2;
  std::string center, u0;
  // 0 picks a working default for d: (0.5, 0.6, 0.08) in d = 2, (0.3, 0.8, 0.02) in d = 3, delta0 0.01 above
  double angle = 0.0;
  double delta1 = 0.0, delta0 = 0.0;
  int probes = 10000;
  int max_iter = 0;
  std::uint64_t seed = 42;
  std::string json, output;

  void add(CLI::App* app) {
    app->add_option("-d,--dim", d, "dimension")->capture_default_str();
    app->add_option("--center", center, "initial cap center (default e1)");
    app->add_option("--angle", angle, "initial cap angle (0: by dimension)");
    app->add_option("--u0", u0, "reflection base direction (default e_d)");
    app->add_option("--delta1", delta1, "admissible cap angle (0: by dimension)");
    app->add_option("--delta0", delta0, "growth per step (0: by dimension)");
    app->add_option("--probes", probes, "probe directions per step")->capture_default_str();
    app->add_option("--max-iter", max_iter, "iteration cap (0: ceil(pi/delta0))")->capture_default_str();
    app->add_option("--seed", seed, "sampling seed")->capture_default_str();
    app->add_option("--json", json, "write the trace as JSON");
    app->add_option("-o,--output", output, "CSV path");
  }

  void exec(std::ostream& out, std::ostream& err) const {
    if (d < 2) throw ValidationError("capflow needs d >= 2");
    RealVec c(d, 0.0), u(d, 0.0);
    c[0] = 1.0;
    u[d - 1] = 1.0;
    if (!center.empty()) c = parse_vec(center, "--center");
    if (!u0.empty()) u = parse_vec(u0, "--u0");
    if (static_cast<int>(c.size()) != d || static_cast<int>(u.size()) != d)
      throw ValidationError("--center and --u0 need d entries");
    const double nc = norm(c), nu = norm(u);
    if (!(nc > 0) || !(nu > 0)) throw ValidationError("--center and --u0 must be nonzero");
    for (auto& x : c) x /= nc;
    for (auto& x : u) x /= nu;
    if (angle < 0 || delta1 < 0 || delta0 < 0) throw ValidationError("capflow angles must be positive");
    const bool planar = d == 2;
    const double a = angle > 0 ? angle : (planar ? 0.5 : 0.3);
    const double d1 = delta1 > 0 ? delta1 : (planar ? 0.6 : 0.8);
    const double d0 = delta0 > 0 ? delta0 : (planar ? 0.08 : d == 3 ? 0.02 : 0.01);
    const auto prop = cap_propagate(Cap(c, a), u, d1, d0, max_iter, probes, seed);
    std::ostringstream os;
    os << "step";
    for (int i = 0; i < d; ++i) os << ",c" << i + 1;
    os << ",angle,epsilon,probes,probe_failures\n";
    for (std::size_t k = 0; k < prop.steps.size(); ++k) {
      const auto& s = prop.steps[k];
      os << k;
      for (double x : s.cap.center) os << ',' << format_double(x);
      os << ',' << format_double(s.cap.angle) << ',' << format_double(s.epsilon) << ',' << s.probes << ','
         << s.probe_failures << '\n';
    }
    emit(output, os.str(), out);
    if (!json.empty()) emit(json, cap_propagation_json(prop).dump(2) + "\n", out);
    err << "capflow: epsilon_d=" << format_double(prop.epsilon_d) << " iterations=" << prop.iterations
        << " full_sphere=" << (prop.full_sphere ? "yes" : "no") << '\n';
  }
};

struct LegendreCmd {
  int pairs = 0;
  int parallels = 0;
  std::string output;

  void add(CLI::App* app) {
    app->add_option("--pairs", pairs, "gcd table for 1 <= m < n <= N");
    app->add_option("--parallels", parallels, "nodal parallels of the zonal harmonic of degree n");
    app->add_option("-o,--output", output, "CSV path");
  }

  void exec(std::ostream& out) const {
    if (pairs <= 0 && parallels <= 0) throw ValidationError("legendre: give --pairs and/or --parallels");
    std::string text;
    if (pairs > 0) text += gcd_table_csv(pairs);
    if (parallels > 0) text += parallels_csv(parallels);
    emit(output, text, out);
  }
};

struct LaurentCmd {
  PhiSource phi;
  std::string xi0;
  std::int64_t genus = 0, s = 3;
  double c_s = 1.0;
  std::string output;

  void add(CLI::App* app) {
    phi.add(app, false);
    app->add_option("--xi0", xi0, "base frequency (default: first in lexicographic order)");
    app->add_option("--genus", genus, "genus of the curve")->capture_default_str();
    app->add_option("--s", s, "number of places in S")->capture_default_str();
    app->add_option("--cs", c_s, "height constant c_S")->capture_default_str();
    app->add_option("-o,--output", output, "JSON path");
  }

  void exec(std::ostream& out) const {
    if (phi.d != 2 && phi.input.empty()) throw ValidationError("laurent needs d = 2");
    const auto e = phi.load();
    const LatticePoint base = xi0.empty() ? e.coeffs().begin()->first : parse_point(xi0, "--xi0");
    Json j;
    j["eigenfunction"] = eigenfunction_json(e);
    j["laurent"] = laurent_json(to_laurent(e));
    j["frequency_box"] = frequency_box_json(frequency_box_check(e, base, genus, s, c_s));
    emit(output, j.dump(2) + "\n", out);
  }
};

// --config: keys of a flat JSON object become long flags of the selected
// subcommand unless that flag was given on the command line.
std::vector<std::string> apply_config(CLI::App& app, std::vector<std::string> args) {
  std::string path;
  std::vector<std::string> rest;
  for (std::size_t k = 0; k < args.size(); ++k) {
    if (args[k] == "--config") {
      if (k + 1 >= args.size()) throw ValidationError("--config needs a path");
      path = args[++k];
    } else if (args[k].rfind("--config=", 0) == 0) {
      path = args[k].substr(9);
    } else {
      rest.push_back(args[k]);
    }
  }
  if (path.empty()) return rest;
  const Json cfg = read_json_file(path);
  if (!cfg.is_object()) throw ValidationError("config must be a JSON object");
  auto pos = std::find_if(rest.begin(), rest.end(), [&](const std::string& a) {
    return !a.empty() && a[0] != '-' && app.get_subcommand_no_throw(a) != nullptr;
  });
  if (pos == rest.end()) throw ValidationError("--config needs a subcommand");
  CLI::App* sub = app.get_subcommand(*pos);
  std::vector<std::string> injected;
  for (const auto& [key, value] : cfg.items()) {
    const CLI::Option* opt = sub->get_option_no_throw("--" + key);
    if (!opt) throw ValidationError("unknown config key '" + key + "' for " + sub->get_name());
    bool given = false;
    for (const auto& a : rest) {
      for (const auto& ln : opt->get_lnames())
        if (a == "--" + ln || a.rfind("--" + ln + "=", 0) == 0) given = true;
      for (const auto& sn : opt->get_snames())
        if (a == "-" + sn) given = true;
    }
    if (given) continue;
    auto scalar = [](const Json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); };
    if (value.is_boolean()) {
      if (value.get<bool>()) injected.push_back("--" + key);
    } else if (value.is_array()) {
      std::string joined;
      for (const auto& e : value) joined += (joined.empty() ? "" : ",") + scalar(e);
      injected.push_back("--" + key);
      injected.push_back(joined);
    } else {
      injected.push_back("--" + key);
      injected.push_back(scalar(value));
    }
  }
  rest.insert(pos + 1, injected.begin(), injected.end());
  return rest;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app("Nodal sets of flat-torus eigenfunctions: desk-scale experiments", "toral_nodal");
  app.require_subcommand(1);
  app.fallthrough(false);

  ShellCmd shell;
  ClustersCmd clusters;
  JarnikCmd jarnik;
  NodalCmd nodal;
  RestrictCmd restrict_;
  MeanSquareCmd meansquare;
  OscDecayCmd oscdecay;
  CapFlowCmd capflow;
  LegendreCmd legendre;
  LaurentCmd laurent;

  shell.add(app.add_subcommand("shell", "enumerate a lattice shell"));
  clusters.add(app.add_subcommand("clusters", "rho-separated cluster decomposition (JSON)"));
  jarnik.add(app.add_subcommand("jarnik", "affine rank of small caps on random shells"));
  nodal.add(app.add_subcommand("nodal", "marching-squares nodal lines of a planar eigenfunction"));
  restrict_.add(app.add_subcommand("restrict", "L2 restriction norms on real curves"));
  meansquare.add(app.add_subcommand("meansquare", "mean square on a complex patch and its lower-bound certificate"));
  oscdecay.add(app.add_subcommand("oscdecay", "decay of the oscillatory integral J (CSV)"));
  capflow.add(app.add_subcommand("capflow", "cap propagation trace"));
  legendre.add(app.add_subcommand("legendre", "Legendre gcd tables and zonal parallels"));
  laurent.add(app.add_subcommand("laurent", "Laurent form and abc frequency check"));
  for (auto* sub : app.get_subcommands({})) sub->add_option("--config", "JSON file of flag values");

  try {
    auto argv = apply_config(app, args);
    std::reverse(argv.begin(), argv.end());
    app.parse(argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return 1;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return 1;
  }

  try {
    const std::string name = app.get_subcommands().front()->get_name();
    if (name == "shell") shell.exec(out);
    else if (name == "clusters") clusters.exec(out);
    else if (name == "jarnik") jarnik.exec(out, err);
    else if (name == "nodal") nodal.exec(out, err);
    else if (name == "restrict") restrict_.exec(out);
    else if (name == "meansquare") meansquare.exec(out);
    else if (name == "oscdecay") oscdecay.exec(out, err);
    else if (name == "capflow") capflow.exec(out, err);
    else if (name == "legendre") legendre.exec(out);
    else if (name == "laurent") laurent.exec(out);
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return 2;
  } catch (const std::bad_alloc&) {
    err << "numerical failure: out of memory\n";
    return 2;
  }
  out.flush();
  return 0;
}

int run(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace toral
