#include <hypolab/coeff.hpp>
#include <hypolab/elliptic.hpp>
#include <hypolab/experiment.hpp>
#include <hypolab/interp.hpp>
#include <hypolab/mp_criterion.hpp>
#include <hypolab/report.hpp>
#include <hypolab/superlog.hpp>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>

namespace py = pybind11;
using namespace hypolab;

namespace {

py::dict probe_dict(const superlog::ProbeReport& r) {
  py::dict d;
  d["p"] = r.p;
  d["coefficient"] = r.coefficient;
  d["nodes"] = r.nodes;
  d["zeta"] = r.zeta;
  d["lambda_min"] = r.lambda_min;
  d["ratios"] = r.ratios;
  d["fitted_exponent"] = r.fitted_exponent;
  d["balance_exponent"] = r.balance_exponent;
  d["under_resolved"] = r.under_resolved;
  d["verdict"] = superlog::to_string(r.verdict);
  d["rule"] = r.rule;
  return d;
}

py::dict mp_dict(const mp::MpVerdict& v) {
  py::list delta, s;
  for (const auto& pt : v.s_curve) {
    delta.append(pt.delta);
    s.append(pt.S);
  }
  py::dict d;
  d["p"] = v.p;
  d["delta0"] = v.delta0;
  d["delta"] = delta;
  d["S"] = s;
  d["verdict"] = superlog::to_string(v.verdict);
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Numerical probes for hypoelliptic weights: coefficients, spectra, barriers and runs.";
  m.attr("__version__") = HYPOLAB_VERSION;
  m.attr("schema_version") = report::schema_version;

  // Domain errors surface as ValueError; ConfigError keeps its field list in the message.
  py::register_exception<Error>(m, "HypolabError", PyExc_ValueError);

  py::class_<coeff::CoeffFn>(m, "Coefficient")
      .def(py::init([](const std::string& src, double lo, double hi) {
             return coeff::parse_coeff(src, coeff::Domain{lo, hi});
           }),
           py::arg("source"), py::arg("lo") = -1.0, py::arg("hi") = 1.0)
      .def("__call__", &coeff::CoeffFn::eval, py::arg("y"))
      .def("log", &coeff::CoeffFn::log_eval, py::arg("y"))
      .def_property_readonly("source", &coeff::CoeffFn::source)
      .def("__repr__", [](const coeff::CoeffFn& f) { return "Coefficient('" + f.source() + "')"; });

  m.def("japanese_bracket", &superlog::japanese_bracket, py::arg("zeta"));
  m.def("interpolation_constant", &superlog::interpolation_constant, py::arg("p"), py::arg("s2"));

  m.def("ground_states", &superlog::ground_states, py::arg("a"), py::arg("R") = 1.0, py::arg("nodes") = 8193,
        py::arg("k_lo") = 4, py::arg("k_hi") = 20, py::call_guard<py::gil_scoped_release>());

  m.def(
      "lambda_growth",
      [](const coeff::CoeffFn& a, double p, double R, std::size_t nodes, int k_lo, int k_hi, bool check_stability) {
        superlog::ProbeOptions o;
        o.check_stability = check_stability;
        superlog::ProbeReport r;
        {
          py::gil_scoped_release release;
          r = superlog::lambda_growth(a, p, R, nodes, k_lo, k_hi, o);
        }
        return probe_dict(r);
      },
      py::arg("a"), py::arg("p"), py::arg("R") = 1.0, py::arg("nodes") = 8193, py::arg("k_lo") = 4,
      py::arg("k_hi") = 20, py::arg("check_stability") = true);

  m.def(
      "mp_check",
      [](const coeff::CoeffFn& a, double p, double delta0) {
        mp::MpVerdict v;
        {
          py::gil_scoped_release release;
          v = mp::mp_check(a, p, delta0);
        }
        return mp_dict(v);
      },
      py::arg("a"), py::arg("p"), py::arg("delta0") = 0.25);

  m.def(
      "barrier_params",
      [](double inf_a11, double norm_a1, double norm_a0, double norm_g, double lambda_min) {
        const auto bp = elliptic::barrier_params(inf_a11, norm_a1, norm_a0, norm_g, lambda_min);
        py::dict d;
        d["beta"] = bp.beta;
        d["beta0"] = bp.beta0;
        d["beta1"] = bp.beta1;
        d["r0"] = bp.r0;
        d["c0"] = bp.c0;
        return d;
      },
      py::arg("inf_a11"), py::arg("norm_a1"), py::arg("norm_a0"), py::arg("norm_g"), py::arg("lambda_min") = 1.0);

  m.def(
      "split_point",
      [](double xi, double eps, double p, double s2) {
        const auto sp = interp::split_point(xi, eps, p, s2);
        py::dict d;
        d["R"] = sp.R;
        d["log_bracket"] = sp.log_bracket;
        d["positive"] = sp.positive;
        d["identities_hold"] = sp.identities_hold;
        return d;
      },
      py::arg("xi"), py::arg("eps"), py::arg("p"), py::arg("s2"));

  m.def(
      "run",
      [](const std::string& config, std::optional<std::uint64_t> seed) {
        const auto cfg = report::Json::parse(config);
        experiment::Outcome o;
        {
          py::gil_scoped_release release;
          o = experiment::run(cfg, seed);
        }
        return py::make_tuple(o.exit_code, report::dump(o.report));
      },
      py::arg("config"), py::arg("seed") = py::none(),
      "Runs one experiment from a JSON config string; returns (exit_code, report_json).");
}
