#include "ruinopt/io.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace ruinopt;

namespace {

py::dict as_dict(const io::Json &j) {
  return py::module_::import("json").attr("loads")(j.dump()).cast<py::dict>();
}

} // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Ruin-minimising deductible-with-limit insurance contracts";

  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<UnboundedError>(m, "UnboundedError", PyExc_ValueError);
  py::register_exception<PremiumNotFinite>(m, "PremiumNotFinite", PyExc_ArithmeticError);

  py::class_<LossModel>(m, "LossModel")
      .def_static("exponential", &LossModel::exponential, py::arg("rate"))
      .def_static("pareto", &LossModel::pareto, py::arg("shape"), py::arg("scale"))
      .def_static("uniform", &LossModel::uniform, py::arg("upper"))
      .def_static("lognormal", &LossModel::lognormal, py::arg("mu"), py::arg("sigma"))
      .def_static("atom_scaled", &LossModel::atom_scaled, py::arg("q"), py::arg("inner"))
      .def_static(
          "empirical",
          [](const std::vector<std::pair<double, double>> &points) {
            std::vector<QuantilePoint> table;
            for (auto [p, x] : points)
              table.push_back({p, x});
            return load_empirical(table);
          },
          py::arg("points"), "Quantile table [(p, x), ...] with p decreasing.")
      .def("survival", &LossModel::survival, py::arg("x"))
      .def("quantile", &LossModel::quantile, py::arg("p"))
      .def("essential_sup", &LossModel::essential_sup)
      .def("mass_above_zero", &LossModel::mass_above_zero)
      .def("__repr__", &LossModel::describe);

  py::class_<Distortion>(m, "Distortion")
      .def_static("identity", &Distortion::identity)
      .def_static("proportional_hazard", &Distortion::proportional_hazard, py::arg("c"))
      .def_static("dual_power", &Distortion::dual_power, py::arg("k"))
      .def_static("wang", &Distortion::wang, py::arg("lam"))
      .def("__call__", &Distortion::operator(), py::arg("p"))
      .def("inverse", &Distortion::inverse, py::arg("y"))
      .def("__repr__", &Distortion::describe);

  py::class_<Market>(m, "Market")
      .def(py::init<LossModel, Distortion, double>(), py::arg("loss"), py::arg("distortion"),
           py::arg("theta"))
      .def_property_readonly("loss", &Market::loss)
      .def_property_readonly("distortion", &Market::distortion)
      .def_property_readonly("theta", &Market::theta)
      .def_property_readonly("full_premium", &Market::full_premium);

  py::class_<DimlContract>(m, "DimlContract")
      .def_static("make", &DimlContract::make, py::arg("loss"), py::arg("d"), py::arg("m"))
      .def_readonly("d", &DimlContract::d)
      .def_readonly("m", &DimlContract::m)
      .def("__repr__", [](const DimlContract &c) {
        return "DimlContract(d=" + py::repr(py::float_(c.d)).cast<std::string>() +
               ", m=" + py::repr(py::float_(c.m)).cast<std::string>() + ")";
      });

  py::class_<PremiumQuote>(m, "PremiumQuote")
      .def_readonly("pi_I", &PremiumQuote::pi_I)
      .def_readonly("pi_R", &PremiumQuote::pi_R)
      .def_readonly("pi_X", &PremiumQuote::pi_X)
      .def_readonly("truncation_error_bound", &PremiumQuote::truncation_error_bound);

  py::class_<Thresholds>(m, "Thresholds")
      .def_readonly("theta_s", &Thresholds::theta_s)
      .def_readonly("d_s", &Thresholds::d_s)
      .def_readonly("w_s", &Thresholds::w_s);

  py::class_<Solution>(m, "Solution")
      .def_property_readonly("case", [](const Solution &s) { return std::string(case_name(s.kind)); })
      .def_readonly("contract", &Solution::contract)
      .def_readonly("premium", &Solution::premium)
      .def_readonly("ruin_prob", &Solution::ruin_prob)
      .def_readonly("thresholds", &Solution::thresholds);

  m.def("psi", &psi, py::arg("market"), py::arg("x"));
  m.def("phi", &phi, py::arg("market"), py::arg("x"));
  m.def("psi_inverse", &psi_inverse, py::arg("market"), py::arg("y"));
  m.def("premium_diml", &premium_diml, py::arg("market"), py::arg("d"), py::arg("m"));
  m.def("thresholds", &thresholds, py::arg("market"));
  m.def("solve", &solve, py::arg("market"), py::arg("w"));
  m.def("ruin_probability", &ruin_probability, py::arg("market"), py::arg("contract"),
        py::arg("w"));

  m.def(
      "grid_oracle",
      [](const Market &market, double w, std::size_t n, unsigned threads) {
        verify::OracleReport r;
        {
          py::gil_scoped_release unlocked;
          r = verify::grid_oracle(market, w, n, n, threads);
        }
        return as_dict(io::to_json(r, market.loss()));
      },
      py::arg("market"), py::arg("w"), py::arg("n") = 512, py::arg("threads") = 1);
  m.def(
      "random_admissible_oracle",
      [](const Market &market, double w, std::size_t samples, std::size_t cells,
         std::uint64_t seed, unsigned threads) {
        verify::OracleReport r;
        {
          py::gil_scoped_release unlocked;
          r = verify::random_admissible_oracle(market, w, samples, cells, seed, threads);
        }
        return as_dict(io::to_json(r, market.loss()));
      },
      py::arg("market"), py::arg("w"), py::arg("samples") = 10000, py::arg("cells") = 1000,
      py::arg("seed") = 7, py::arg("threads") = 1);
  m.def(
      "monte_carlo_ruin",
      [](const Market &market, const DimlContract &c, double w, std::uint64_t paths,
         std::uint64_t seed, unsigned threads) {
        verify::MonteCarloResult r;
        {
          py::gil_scoped_release unlocked;
          r = verify::monte_carlo_ruin(market, c, w, paths, seed, threads);
        }
        return as_dict(io::to_json(r));
      },
      py::arg("market"), py::arg("contract"), py::arg("w"), py::arg("paths") = 1000000,
      py::arg("seed") = 7, py::arg("threads") = 1);

  m.def(
      "market_from_config",
      [](const std::string &text) {
        auto cfg = io::parse_config(text);
        return py::make_tuple(cfg.market(), cfg.wealth);
      },
      py::arg("text"), "Parse a JSON config into (Market, wealth).");
  m.def(
      "solution_json",
      [](const Solution &s, const LossModel &loss) { return io::to_json(s, loss).dump(2); },
      py::arg("solution"), py::arg("loss"));
}
