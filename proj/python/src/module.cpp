#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "mdt/bignum.hpp"
#include "mdt/bounds.hpp"
#include "mdt/commands.hpp"
#include "mdt/config.hpp"
#include "mdt/errors.hpp"
#include "mdt/matching.hpp"
#include "mdt/thermo.hpp"
#include "mdt/transfer.hpp"

namespace py = pybind11;
using namespace mdt;

namespace {

py::object to_py(const BigInt& v) { return py::module_::import("builtins").attr("int")(to_string(v)); }

py::object to_py(const Rational& v) {
  return py::module_::import("fractions").attr("Fraction")(to_string(v));
}

Rational from_py(const py::object& x) { return parse_rational(py::str(x).cast<std::string>()); }

LayeredFamily make_family(const std::string& base, const std::vector<std::size_t>& size, const std::string& connection,
                          std::uint64_t seed) {
  FamilySpec spec;
  spec.base = base;
  spec.dims = size;
  spec.connection = connection;
  return build_family(spec, seed);
}

py::list coefficients(const MatchingPolynomial& mp) {
  py::list out;
  for (const auto& c : mp.coefficients()) out.append(to_py(c));
  return out;
}

py::dict sample_dict(const ThermoSample& s) {
  py::dict d;
  d["t"] = s.t;
  d["rho"] = s.rho;
  d["P"] = s.pressure;
  d["p"] = s.density;
  d["h"] = s.entropy;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Transfer-matrix monomer-dimer entropy for layered graph families";

  py::register_exception<InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);
  py::register_exception<ResourceLimit>(m, "ResourceLimit", PyExc_RuntimeError);
  py::register_exception<NumericFailure>(m, "NumericFailure", PyExc_ArithmeticError);
  py::register_exception<RangeError>(m, "RangeError", PyExc_OverflowError);

  py::class_<LayeredFamily>(m, "Family")
      .def(py::init(&make_family), py::arg("base") = "cycle", py::arg("size") = std::vector<std::size_t>{4},
           py::arg("connection") = "identity", py::arg("seed") = 1)
      .def_property_readonly("name", &LayeredFamily::name)
      .def_property_readonly("width", &LayeredFamily::width)
      .def_property_readonly("regularity", &LayeredFamily::regularity)
      .def(
          "layer_matchings",
          [](const LayeredFamily& f, std::size_t n) { return coefficients(matching_polynomial(build_layer_graph(f, n))); },
          py::arg("n"), "phi(l, G_n) for l = 0, 1, ...")
      .def(
          "exact_trace",
          [](const LayeredFamily& f, const py::object& x, std::size_t n) {
            return to_py(exact_trace_power(TransferMatrix(f), from_py(x), n));
          },
          py::arg("x"), py::arg("n"), "tr B^n at e^t = x (int, str or Fraction)")
      .def(
          "pressure", [](const LayeredFamily& f, double t) { return ThermoModel(f).sample(t).pressure; },
          py::arg("t"))
      .def(
          "sample", [](const LayeredFamily& f, double t) { return sample_dict(ThermoModel(f).sample(t)); },
          py::arg("t"))
      .def(
          "sweep",
          [](const LayeredFamily& f, std::optional<std::vector<double>> grid) {
            const EntropyCurve curve = sweep(f, grid ? *grid : default_grid());
            py::list rows;
            for (const auto& s : curve.samples) rows.append(sample_dict(s));
            if (curve.partial) throw NumericFailure(curve.error, 0.0);
            return rows;
          },
          py::arg("grid") = py::none());

  m.def(
      "matching_polynomial",
      [](std::size_t vertices, const std::vector<std::tuple<Vertex, Vertex, std::uint32_t>>& edges) {
        std::vector<Edge> list;
        for (const auto& [u, v, k] : edges) list.push_back({u, v, k});
        return coefficients(matching_polynomial(Graph(vertices, list)));
      },
      py::arg("vertices"), py::arg("edges"), "edges as (u, v, multiplicity)");
  m.def("krr_matching_count", [](std::int64_t r, std::int64_t l) { return to_py(krr_matching_count(r, l)); });

  m.def("h1", &h1, py::arg("p"));
  m.def("gh", &gh, py::arg("r"), py::arg("p"));
  m.def("ghl", [](int r, double p) { return ghl(r, p); }, py::arg("r"), py::arg("p"));
  m.def("low1", [](int r, double p) { return low1(r, p); }, py::arg("r"), py::arg("p"));
  m.def("low2", [](int r, double p) { return low2(r, p); }, py::arg("r"), py::arg("p"));
  m.def("upp1", &upp1, py::arg("r"), py::arg("p"));
  m.def("upp2", &upp2, py::arg("r"), py::arg("p"));
  m.def("hK", [](int r, double t) {
    const auto k = hK(r, t);
    return py::dict(py::arg("t") = k.t, py::arg("P") = k.pressure, py::arg("p") = k.p, py::arg("h") = k.h);
  }, py::arg("r"), py::arg("t"));
  m.def("hK_density_exact", [](int r, const py::object& y) { return to_py(hK_density_exact(r, from_py(y))); },
        py::arg("r"), py::arg("y"));
  m.def("bound", &evaluate_bound, py::arg("name"), py::arg("r"), py::arg("p"));
  m.def("default_grid", [] { return default_grid(); });

  m.def(
      "run",
      [](const std::string& command, const std::string& config_json) {
        std::ostringstream log;
        const RunConfig config = RunConfig::from_json(nlohmann::json::parse(config_json));
        const CommandResult res = run_command(command, config, log);
        return py::make_tuple(res.exit_code, res.report().dump(), log.str());
      },
      py::arg("command"), py::arg("config_json"), "returns (exit_code, report_json, log)");
}
