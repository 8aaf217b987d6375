#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "secisac/fairness.hpp"
#include "secisac/feasibility.hpp"
#include "secisac/sim.hpp"
#include "secisac/solver.hpp"

namespace py = pybind11;
using namespace secisac;

PYBIND11_MODULE(_secisac, m) {
  m.doc() = "Fairness-aware secure ISAC beamforming (C++ core bindings)";

  py::class_<SystemConfig>(m, "SystemConfig")
      .def(py::init<>())
      .def_readwrite("n_tx", &SystemConfig::n_tx)
      .def_readwrite("n_users", &SystemConfig::n_users)
      .def_readwrite("n_targets", &SystemConfig::n_targets)
      .def_readwrite("per_user_power", &SystemConfig::per_user_power)
      .def_readwrite("total_power", &SystemConfig::total_power)
      .def_readwrite("noise_user", &SystemConfig::noise_user)
      .def_readwrite("noise_eve", &SystemConfig::noise_eve)
      .def_readwrite("target_angles", &SystemConfig::target_angles)
      .def_readwrite("beamwidth_half", &SystemConfig::beamwidth_half)
      .def_readwrite("eaves_rate_cap", &SystemConfig::eaves_rate_cap)
      .def_readwrite("sensing_floor", &SystemConfig::sensing_floor)
      .def_readwrite("path_gain", &SystemConfig::path_gain)
      .def_readwrite("fairness_floor", &SystemConfig::fairness_floor)
      .def_readwrite("entropy_weight", &SystemConfig::entropy_weight)
      .def_readwrite("penalty_weight", &SystemConfig::penalty_weight)
      .def_readwrite("tradeoff_steps", &SystemConfig::tradeoff_steps)
      .def_readwrite("inner_iters", &SystemConfig::inner_iters)
      .def_readwrite("trust_rate", &SystemConfig::trust_rate)
      .def_readwrite("step_size", &SystemConfig::step_size)
      .def_readwrite("spacing_ratio", &SystemConfig::spacing_ratio)
      .def_readwrite("conv_tol", &SystemConfig::conv_tol)
      .def_readwrite("max_outer_iters", &SystemConfig::max_outer_iters)
      .def("validate", &SystemConfig::validate)
      .def("an_power_budget", &SystemConfig::an_power_budget)
      .def_static("from_json_file", &SystemConfig::from_json_file)
      .def_static("from_json_text", &SystemConfig::from_json_text);

  py::class_<Scenario>(m, "Scenario")
      .def_readonly("config", &Scenario::config)
      .def_readonly("channels", &Scenario::channels)
      .def_readonly("target_steering", &Scenario::target_steering)
      .def_readonly("seed", &Scenario::seed);

  py::class_<NullProjector>(m, "NullProjector")
      .def_readonly("matrix", &NullProjector::matrix)
      .def_readonly("source_rank", &NullProjector::source_rank);

  py::class_<Solution>(m, "Solution")
      .def_readonly("beams", &Solution::beams)
      .def_readonly("an", &Solution::an)
      .def_readonly("an_effective", &Solution::an_effective);

  py::class_<RateReport>(m, "RateReport")
      .def_readonly("sinr_legit", &RateReport::sinr_legit)
      .def_readonly("snr_eve", &RateReport::snr_eve)
      .def_readonly("secrecy_per_user", &RateReport::secrecy_per_user)
      .def_readonly("sum_secrecy", &RateReport::sum_secrecy)
      .def_readonly("sum_rate", &RateReport::sum_rate);

  py::class_<FairnessState>(m, "FairnessState")
      .def_readonly("mu", &FairnessState::mu)
      .def_readonly("chi", &FairnessState::chi)
      .def_readonly("objective", &FairnessState::objective)
      .def_readonly("fairness", &FairnessState::fairness)
      .def_readonly("entropy", &FairnessState::entropy_val);

  py::class_<HfroResult>(m, "HfroResult")
      .def_readonly("mu", &HfroResult::mu)
      .def_readonly("trace", &HfroResult::trace);

  py::enum_<ConvergenceStatus>(m, "ConvergenceStatus")
      .value("CONVERGED", ConvergenceStatus::kConverged)
      .value("MAX_ITERATIONS", ConvergenceStatus::kMaxIterations)
      .value("ABORTED", ConvergenceStatus::kAborted);

  py::class_<TraceRow>(m, "TraceRow")
      .def_readonly("iteration", &TraceRow::iteration)
      .def_readonly("objective", &TraceRow::objective)
      .def_readonly("sum_secrecy", &TraceRow::sum_secrecy);

  py::class_<SolveResult>(m, "SolveResult")
      .def_readonly("solution", &SolveResult::solution)
      .def_readonly("trace", &SolveResult::trace)
      .def_readonly("status", &SolveResult::status);

  m.def("steering_vector", &steering_vector, py::arg("theta"),
        py::arg("n_tx"), py::arg("spacing_ratio") = 0.5);
  m.def("sample_scenario", &sample_scenario, py::arg("config"),
        py::arg("seed"));
  m.def("null_projector", &null_projector, py::arg("channels"));
  m.def("sinr_legitimate", &sinr_legitimate);
  m.def("snr_eavesdropper", &snr_eavesdropper);
  m.def("rate_report", &rate_report);
  m.def("jain_index", &jain_index, py::arg("mu"), py::arg("rho"));
  m.def("entropy", &entropy, py::arg("mu"));
  m.def("beam_gain", &beam_gain, py::arg("solution"), py::arg("scenario"),
        py::arg("theta"));
  m.def("project_simplex", &project_simplex, py::arg("v"));
  m.def("fairness_closed_form", &fairness_closed_form, py::arg("rho"));
  m.def(
      "hfro_optimize",
      [](const VecR& rho, const SystemConfig& cfg) {
        return hfro_optimize(rho, cfg);
      },
      py::arg("rho"), py::arg("config"));
  m.def(
      "alternating_solve",
      [](const Scenario& sc, const VecR& mu) {
        return alternating_solve(sc, mu);
      },
      py::arg("scenario"), py::arg("mu"),
      py::call_guard<py::gil_scoped_release>());
}
