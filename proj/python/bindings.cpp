#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "commands.hpp"
#include "corrgame/arbiter.hpp"
#include "corrgame/equilibrium.hpp"
#include "corrgame/error.hpp"
#include "corrgame/serialize.hpp"

namespace py = pybind11;
using namespace corrgame;

namespace {

// Reports and results cross the boundary as plain dicts.
py::object to_py(const Json& j) {
  return py::module_::import("json").attr("loads")(j.dump());
}

Json from_py(const py::object& o) {
  return Json::parse(py::module_::import("json").attr("dumps")(o).cast<std::string>());
}

py::tuple pair(const PayoffPair& p) { return py::make_tuple(p.a, p.b); }

Bimatrix2x2 matrix_from(const std::vector<std::vector<std::pair<double, double>>>& rows) {
  if (rows.size() != 2 || rows[0].size() != 2 || rows[1].size() != 2) {
    throw Error(ErrorCode::kDomain, "matrix must be 2x2 of (a, b) pairs");
  }
  Bimatrix2x2::Entries e{};
  for (int i = 0; i < 2; ++i) {
    for (int k = 0; k < 2; ++k) e[i][k] = {rows[i][k].first, rows[i][k].second};
  }
  return Bimatrix2x2(e);
}

}  // namespace

PYBIND11_MODULE(corrgame, m) {
  m.doc() = "Correlation games: g-functions, kernels, equilibria and settlement";

  py::register_exception<Error>(m, "CorrGameError", PyExc_ValueError);

  py::class_<GFunction>(m, "GFunction")
      .def_property_readonly("name", &GFunction::name)
      .def_property_readonly("params", &GFunction::params)
      .def_property_readonly("invertible",
                             [](const GFunction& g) { return g.traits().invertible; })
      .def_property_readonly("continuous",
                             [](const GFunction& g) { return g.traits().continuous; })
      .def_property_readonly(
          "discontinuities",
          [](const GFunction& g) { return g.traits().discontinuities; })
      .def("__call__", [](const GFunction& g, double t) { return g.eval(t); })
      .def("preimage",
           [](const GFunction& g, double p) {
             py::list out;
             for (const auto& pt : g.preimage(Probability(p))) {
               out.append(py::dict(py::arg("theta") = pt.theta,
                                   py::arg("limit_only") = pt.limit_only,
                                   py::arg("side") = pt.side));
             }
             return out;
           })
      .def("big_g", [](const GFunction& g, double x) { return g.big_g(x).value(); })
      .def("q_transform_angle",
           [](const GFunction& g, double t) {
             return g.q_transform_angle(Angle(t)).value();
           })
      .def("q_transform",
           [](const GFunction& g, double p) {
             return g.q_transform(Probability(p)).value();
           })
      .def("q_preimage", [](const GFunction& g, double p) {
        py::list out;
        for (const auto& im : g.q_preimage(Probability(p))) {
          out.append(py::dict(py::arg("p") = im.p, py::arg("theta") = im.theta,
                              py::arg("limit_only") = im.limit_only));
        }
        return out;
      });

  m.def("make_catalog", &make_catalog, py::arg("name"),
        py::arg("params") = GParams{});

  py::class_<CorrelationModel>(m, "CorrelationModel")
      .def_static("by_name", &CorrelationModel::by_name)
      .def_property_readonly("name", &CorrelationModel::name)
      .def("kernel", [](const CorrelationModel& c, double t) {
        return c.kernel(Angle(t));
      });

  py::class_<Bimatrix2x2>(m, "Bimatrix2x2")
      .def(py::init(&matrix_from))
      .def_static("symmetric", &Bimatrix2x2::symmetric)
      .def_static("battle_of_sexes", &Bimatrix2x2::battle_of_sexes)
      .def("at", [](const Bimatrix2x2& b, int i, int k) { return pair(b.at(i, k)); });

  m.def("expected_payoff", [](const Bimatrix2x2& b, double pa, double pb) {
    return pair(expected_payoff_classical(b, Probability(pa), Probability(pb)));
  });
  m.def("kernel_payoff", [](const Bimatrix2x2& b, const GFunction& g,
                            const CorrelationModel& c, double ta, double tb) {
    return pair(kernel_payoff(b, g, c, Angle(ta), Angle(tb)));
  });

  m.def(
      "classical_equilibria",
      [](const Bimatrix2x2& b, double tol, double grid) {
        Json j = analyze_classical(b, {tol, grid});
        return to_py(j);
      },
      py::arg("matrix"), py::arg("tol") = 1e-9, py::arg("grid_step") = 1e-3);
  m.def(
      "correlation_equilibria",
      [](const Bimatrix2x2& b, const GFunction& g, const std::string& model,
         double tol, double grid) {
        Json j = analyze_correlation(b, g, CorrelationModel::by_name(model),
                                     {tol, grid});
        return to_py(j);
      },
      py::arg("matrix"), py::arg("g"), py::arg("model") = "singlet",
      py::arg("tol") = 1e-9, py::arg("grid_step") = 1e-3);

  m.def(
      "analyze",
      [](const py::object& config) {
        const auto c = cli::parse_config(from_py(config));
        Json j = cli::analyze_reports(c);
        return to_py(j);
      },
      py::arg("config"), "Reports for every regime named by a config dict.");

  m.def(
      "simulate",
      [](const py::object& config) {
        const auto c = cli::parse_config(from_py(config));
        const auto spec = cli::build_spec(c);
        const auto log = play_runs(spec, Angle(c.simulation.theta_a),
                                   Angle(c.simulation.theta_b), c.simulation.n,
                                   c.simulation.seed, c.simulation.threads);
        Json j = settle(log, spec);
        return to_py(j);
      },
      py::arg("config"), "Plays and settles the runs a config dict describes.");

  m.def("gfn_csv", &cli::gfn_csv, py::arg("g"), py::arg("resolution"));
}
