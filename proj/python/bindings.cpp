#include <sstream>

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "toral/classical.hpp"
#include "toral/cli.hpp"
#include "toral/errors.hpp"
#include "toral/lattice.hpp"
#include "toral/nodal.hpp"
#include "toral/restriction.hpp"
#include "toral/serialize.hpp"

namespace py = pybind11;
using namespace toral;

namespace {

std::vector<std::vector<std::int64_t>> points_of(const LatticeShell& s) {
  std::vector<std::vector<std::int64_t>> out;
  for (const auto& p : s.points) out.push_back(p.coords());
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Lattice shells, toral eigenfunctions and restriction experiments";

  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<NumericalError>(m, "NumericalError", PyExc_RuntimeError);

  m.def("enumerate_shell", [](int d, std::int64_t r2) { return points_of(enumerate_shell(d, r2)); },
        py::arg("d"), py::arg("r2"));
  m.def("recursion_constants",
        [](int d, const std::string& delta2) {
          const auto c = recursion_constants(d, parse_rational(delta2));
          return std::make_pair(to_string(c.c), to_string(c.delta));
        },
        py::arg("d"), py::arg("delta2") = "1/4");
  m.def("clusters_json",
        [](int d, std::int64_t r2, double rho, const std::string& delta2) {
          const auto shell = enumerate_shell(d, r2);
          ClusterParams p;
          p.rho = rho;
          p.delta2 = parse_rational(delta2);
          const auto dec = cluster_decompose(shell, p);
          return shell_json(shell, &dec).dump();
        },
        py::arg("d"), py::arg("r2"), py::arg("rho"), py::arg("delta2") = "1/4");
  m.def("affine_rank",
        [](const std::vector<std::vector<std::int64_t>>& pts) {
          std::vector<LatticePoint> v;
          for (const auto& p : pts) v.emplace_back(p);
          return affine_rank(v);
        },
        py::arg("points"));

  m.def("legendre", [](int n) { return legendre(n).str(); }, py::arg("n"));
  m.def("common_roots", [](int a, int b) { return common_roots(a, b).str(); }, py::arg("m"), py::arg("n"));
  m.def("legendre_roots", &legendre_roots, py::arg("n"));
  m.def("zonal_parallels", &zonal_parallels, py::arg("n"));
  m.def("abc_bound", &abc_bound, py::arg("m"), py::arg("genus"), py::arg("s"));

  py::class_<Eigenfunction>(m, "Eigenfunction")
      .def_static("from_json", [](const std::string& text) { return eigenfunction_from_json(Json::parse(text)); })
      .def_static("random",
                  [](int d, std::int64_t r2, std::uint64_t seed, bool real) {
                    return random_eigenfunction(enumerate_shell(d, r2), seed, real);
                  },
                  py::arg("d"), py::arg("r2"), py::arg("seed") = 42, py::arg("real") = false)
      .def("to_json", [](const Eigenfunction& e) { return eigenfunction_json(e).dump(); })
      .def_property_readonly("d", &Eigenfunction::d)
      .def_property_readonly("r2", &Eigenfunction::r2)
      .def_property_readonly("support_size", &Eigenfunction::support_size)
      .def("evaluate", &Eigenfunction::evaluate, py::arg("x"))
      .def("l2_mass", &Eigenfunction::l2_mass)
      .def("laurent_json", [](const Eigenfunction& e) { return laurent_json(to_laurent(e)).dump(); })
      .def("nodal_csv",
           [](const Eigenfunction& e, int n) { return nodal_contours(e, n).csv(); }, py::arg("n") = 512);

  m.def("epsilon_d", &epsilon_d, py::arg("d"), py::arg("delta"), py::arg("n_w") = 64, py::arg("seed") = 42);

  m.def("run_cli",
        [](const std::vector<std::string>& args) {
          std::ostringstream out, err;
          int code;
          {
            py::gil_scoped_release release;
            code = run(args, out, err);
          }
          return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"));
}
