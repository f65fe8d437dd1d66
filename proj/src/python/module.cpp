#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "stoprule/dp.hpp"
#include "stoprule/errors.hpp"
#include "stoprule/fullinfo.hpp"
#include "stoprule/mc.hpp"
#include "stoprule/poisson.hpp"

namespace py = pybind11;
using namespace stoprule;

namespace {

py::dict decomposition(const Decomposition& d) {
  py::dict out;
  out["jump"] = d.jump;
  out["drift"] = d.drift;
  out["total"] = d.total;
  return out;
}

ObservationModel make_model(const std::string& kind, Index n, Index k, double p, double rho, double theta) {
  switch (parse_model_kind(kind)) {
    case ModelKind::IidUniform01: return ObservationModel::iid_uniform01(n);
    case ModelKind::TriangularDiscrete: return ObservationModel::triangular(n);
    case ModelKind::RectangularDiscrete: return ObservationModel::rectangular(n, k);
    case ModelKind::BernoulliPyramid: return ObservationModel::bernoulli_pyramid(n, p);
    case ModelKind::TrendUniformShifted: return ObservationModel::trend_shifted(n);
    case ModelKind::TrendUniformScaled: return ObservationModel::trend_scaled(n, rho);
    case ModelKind::TrendPowerUniform: return ObservationModel::trend_power(n, theta);
  }
  throw DomainError("unknown model kind");
}

dp::RecordSemantics semantics(bool strict) { return strict ? dp::RecordSemantics::Strict : dp::RecordSemantics::Weak; }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Best-choice stopping rules: exact solvers, Poisson limits and simulation";

  static py::exception<Error> error(m, "Error", PyExc_RuntimeError);
  py::register_exception<DomainError>(m, "DomainError", error.ptr());
  py::register_exception<StateOutOfRange>(m, "StateOutOfRange", error.ptr());
  py::register_exception<InvalidPolicy>(m, "InvalidPolicy", error.ptr());
  py::register_exception<UnsupportedModel>(m, "UnsupportedModel", error.ptr());
  py::register_exception<ResourceLimit>(m, "ResourceLimit", error.ptr());
  py::register_exception<PrecisionError>(m, "PrecisionError", error.ptr());

  py::class_<ObservationModel>(m, "Model")
      .def(py::init(&make_model), py::arg("kind"), py::arg("n"), py::arg("k") = 0, py::arg("p") = 0.0,
           py::arg("rho") = 0.0, py::arg("theta") = 0.0)
      .def_property_readonly("kind", [](const ObservationModel& x) { return std::string(to_string(x.kind())); })
      .def_property_readonly("n", &ObservationModel::n)
      .def_property_readonly("k", &ObservationModel::support_size)
      .def("__eq__", [](const ObservationModel& a, const ObservationModel& b) { return a == b; })
      .def("__repr__", &ObservationModel::describe);

  m.def(
      "solve",
      [](const ObservationModel& model, Index max_n) {
        dp::DpSolution sol{model, std::nullopt, {}, {}};
        {
          py::gil_scoped_release release;
          sol = dp::solve(model, {.max_n = max_n, .keep_tables = false});
        }
        py::dict out = decomposition(sol.decomposition);
        out["thresholds"] = sol.policy.thresholds();
        return out;
      },
      py::arg("model"), py::arg("max_n") = dp::DpOptions{}.max_n);
  m.def("stop_value", &dp::stop_value, py::arg("model"), py::arg("j"), py::arg("x"));
  m.def("cont_value", &dp::cont_value, py::arg("model"), py::arg("j"), py::arg("x"));
  m.def(
      "policy_value",
      [](const ObservationModel& model, std::vector<double> thresholds, bool strict) {
        return decomposition(dp::policy_value(model, ThresholdPolicy(std::move(thresholds)), semantics(strict)));
      },
      py::arg("model"), py::arg("thresholds"), py::arg("strict") = false);
  m.def(
      "brute_force_value",
      [](const ObservationModel& model, std::vector<double> thresholds, bool strict) {
        return dp::brute_force_value(model, ThresholdPolicy(std::move(thresholds)), semantics(strict));
      },
      py::arg("model"), py::arg("thresholds"), py::arg("strict") = false);

  m.def("gm_optimal_thresholds", [](Index n) { return fullinfo::gm_optimal_thresholds(n).b; }, py::arg("n"));
  m.def(
      "gm_success", [](const std::vector<double>& b) { return decomposition(fullinfo::gm_success(b)); },
      py::arg("thresholds"));
  m.def("sakaguchi_value", &fullinfo::sakaguchi_value, py::arg("n"));
  m.def("tie_probability", &fullinfo::tie_probability, py::arg("model"));

  m.def("expint_e1", &poisson::expint_e1, py::arg("x"));
  m.def("gamma_incomplete", &poisson::gamma_incomplete, py::arg("a"), py::arg("b"), py::arg("c"));
  m.def(
      "beta_star", [](const std::string& g) { return poisson::beta_star(poisson::parse_geometry(g)).root; },
      py::arg("geometry"));
  m.def(
      "success_prob_boundary",
      [](const std::string& g, double beta) { return poisson::success_prob_boundary(poisson::parse_geometry(g), beta); },
      py::arg("geometry"), py::arg("beta"));
  m.def("samuels_value", &poisson::samuels_value);
  m.def("theta_limit", &poisson::theta_limit, py::arg("theta"));
  m.def(
      "rect_roots",
      [](Index k_max, double lambda) {
        auto l = poisson::rect_roots(k_max, lambda);
        py::dict out;
        out["z"] = l.z;
        out["t"] = l.t;
        out["clamped"] = std::vector<bool>(l.clamped.begin(), l.clamped.end());
        return out;
      },
      py::arg("k_max"), py::arg("lam") = 1.0);
  m.def(
      "rect_limit",
      [](double lambda, Index k_max) {
        auto r = poisson::rect_limit(lambda, k_max);
        py::dict out = decomposition(r.value);
        out["truncation_error"] = r.truncation_error;
        out["terms"] = r.terms;
        return out;
      },
      py::arg("lam") = 1.0, py::arg("k_max") = 0);
  m.def("best_t2", [] {
    auto b = poisson::best_t2();
    return py::make_tuple(b.t2, b.value);
  });

  m.def(
      "simulate",
      [](const ObservationModel& model, std::optional<std::vector<double>> thresholds, Index reps, std::uint64_t seed,
         bool strict, unsigned threads) {
        mc::SimConfig cfg{model, std::nullopt, reps, seed, semantics(strict), threads};
        if (thresholds) cfg.policy = ThresholdPolicy(*thresholds);
        mc::SimResult r;
        {
          py::gil_scoped_release release;
          r = mc::simulate(cfg);
        }
        py::dict out;
        out["success_rate"] = r.success_rate;
        out["std_error"] = r.std_error;
        out["tie_rate"] = r.tie_rate;
        out["mean_stop_fraction"] = r.mean_stop_fraction;
        out["stop_fraction_std_error"] = r.stop_fraction_std_error;
        out["replications"] = r.replications;
        out["successes"] = r.successes;
        out["ties"] = r.ties;
        return out;
      },
      py::arg("model"), py::arg("thresholds") = py::none(), py::arg("reps") = 100000, py::arg("seed") = 1,
      py::arg("strict") = false, py::arg("threads") = 0);
  m.def(
      "scaling_check",
      [](const ObservationModel& model, Index reps, std::uint64_t seed) {
        auto r = mc::scaling_check(model, reps, seed);
        py::dict out;
        out["skipped"] = r.skipped;
        out["note"] = r.note;
        out["statistic"] = r.statistic;
        out["threshold"] = r.threshold;
        out["passed"] = r.passed;
        return out;
      },
      py::arg("model"), py::arg("reps") = 100000, py::arg("seed") = 1);
}
