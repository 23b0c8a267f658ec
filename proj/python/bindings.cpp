#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "wpcn/analytic_comp.hpp"
#include "wpcn/analytic_ic.hpp"
#include "wpcn/mc_oracle.hpp"
#include "wpcn/sca_comp.hpp"
#include "wpcn/sca_ic.hpp"

namespace py = pybind11;
using namespace wpcn;

namespace
{

py::list positions(const Trajectory& t, int m)
{
  py::list out;
  for (const Point2& p : t.q[m])
    out.append(py::make_tuple(p.x, p.y));
  return out;
}

py::dict feasibility(const FeasibilityReport& f)
{
  py::dict d;
  d["ok"] = f.ok();
  d["max_violation"] = f.max_violation();
  d["energy_residual"] = f.energy_residual;
  return d;
}

template <class Report>
py::dict common(const Report& r)
{
  py::dict d;
  d["common_rate"] = r.common_rate;
  d["trace"] = r.trace;
  d["init"] = sca::to_string(r.init);
  d["outer_iterations"] = r.outer_iterations;
  d["converged"] = r.converged;
  d["seconds"] = r.seconds;
  d["uav1"] = positions(r.trajectory, 0);
  d["uav2"] = positions(r.trajectory, 1);
  d["feasibility"] = feasibility(r.feasibility);
  return d;
}

py::dict report_ic(const sca::SolveReport& r)
{
  py::dict d = common(r);
  d["delta_E"] = r.allocation.delta_E;
  d["delta_I"] = r.allocation.delta_I;
  d["Q"] = r.allocation.Q;
  return d;
}

py::dict report_comp(const sca::SolveReportCoMP& r)
{
  py::dict d = common(r);
  d["rho_E"] = r.allocation.rho_E;
  d["rho_I"] = r.allocation.rho_I;
  d["Q"] = r.allocation.Q;
  return d;
}

py::dict estimate(const mc::McEstimate& e)
{
  py::dict d;
  d["mean"] = e.mean;
  d["se"] = e.se;
  d["samples"] = e.samples;
  d["seed"] = e.seed;
  return d;
}

std::array<Point2, 2> uav_pair(const std::array<std::array<double, 2>, 2>& u)
{
  return {Point2{u[0][0], u[0][1]}, Point2{u[1][0], u[1][1]}};
}

}  // namespace

PYBIND11_MODULE(_core, m)
{
  m.doc() = "Two-UAV wireless powered network solvers";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<SolverError>(m, "SolverError", PyExc_RuntimeError);

  py::class_<ScenarioConfig>(m, "ScenarioConfig")
      .def(py::init([](double D, double T) { return ScenarioConfig::defaults(D, T); }),
           py::arg("D") = 15.0, py::arg("T") = 4.0)
      .def_readwrite("altitude_H", &ScenarioConfig::altitude_H)
      .def_property_readonly("device_distance_D",
                             [](const ScenarioConfig& c) { return c.device_distance_D; })
      .def("set_device_distance", &ScenarioConfig::set_device_distance)
      .def_readwrite("uav_tx_power_P", &ScenarioConfig::uav_tx_power_P)
      .def_readwrite("eh_efficiency_eta", &ScenarioConfig::eh_efficiency_eta)
      .def_readwrite("ref_gain_beta0", &ScenarioConfig::ref_gain_beta0)
      .def_readwrite("noise_sigma2", &ScenarioConfig::noise_sigma2)
      .def_readwrite("max_speed", &ScenarioConfig::max_speed)
      .def_readwrite("min_separation", &ScenarioConfig::min_separation)
      .def_readwrite("mission_T", &ScenarioConfig::mission_T)
      .def_readwrite("num_slots_N", &ScenarioConfig::num_slots_N)
      .def("validate", &ScenarioConfig::validate);

  m.def("infinite_ic", [](const ScenarioConfig& c) {
    const auto h = analytic::solve_infinite_ic(c);
    py::dict d;
    d["common_rate"] = h.common_rate;
    d["tau_E"] = h.tau_E;
    d["mode"] = analytic::to_string(h.wit_mode);
    d["wpt_hover_x"] = h.wpt_hover_x;
    d["wit_hover_x"] = h.wit_hover_x;
    d["rate_simultaneous"] = h.rate_simultaneous;
    d["rate_tdma"] = h.rate_tdma;
    return d;
  });
  m.def("infinite_comp", [](const ScenarioConfig& c) {
    const auto h = analytic::solve_infinite_comp(c);
    py::dict d;
    d["common_rate"] = h.common_rate;
    d["tau_E"] = h.tau_E_total;
    d["wpt_pair"] = h.wpt_pair;
    d["wit_hover_x"] = h.wit_hover_x;
    d["Q"] = h.Q_comp;
    return d;
  });

  m.def("solve_ic", [](const ScenarioConfig& c) { return report_ic(sca::solve_ic(c)); });
  m.def("solve_comp", [](const ScenarioConfig& c) { return report_comp(sca::solve_comp(c)); });
  m.def("direct_ic", [](const ScenarioConfig& c) { return report_ic(sca::benchmark_direct_ic(c)); });
  m.def("direct_comp",
        [](const ScenarioConfig& c) { return report_comp(sca::benchmark_direct_comp(c)); });

  m.def(
      "sample_zf_rate",
      [](const ScenarioConfig& c, const std::array<std::array<double, 2>, 2>& uavs,
         const std::array<double, 2>& Q, long samples, std::uint64_t seed) {
        const auto r = mc::sample_zf_rate(c, uav_pair(uavs), Q, samples, seed);
        return py::make_tuple(estimate(r[0]), estimate(r[1]));
      },
      py::arg("cfg"), py::arg("uavs"), py::arg("Q"), py::arg("samples") = 100000,
      py::arg("seed") = 1);
  m.def("rate_upper_bound_comp",
        [](const ScenarioConfig& c, const std::array<std::array<double, 2>, 2>& uavs, double Q,
           int k) { return comp_rate_upper_bound(Q, uav_pair(uavs), k, c); });
}
