#pragma once

#include <array>

#include "wpcn/scenario.hpp"

namespace wpcn::analytic
{

/// Infinite-horizon CoMP solution. The charging time tau_E_total is split
/// equally between the two devices. While charging device 1 the UAVs hover at
/// x = wpt_pair[0] and x = wpt_pair[1]; the device-2 phase uses the mirror
/// pair (-wpt_pair[1], -wpt_pair[0]). Uplink hover: (-wit_hover_x, 0) and
/// (+wit_hover_x, 0).
struct HoverSolutionCoMP
{
  double tau_E_total = 0.0;
  std::array<double, 2> wpt_pair{0.0, 0.0};
  double wit_hover_x = 0.0;
  double Q_comp = 0.0;
  double common_rate = 0.0;
  double harvested_energy_per_device = 0.0;
};

/// Charging-phase power collected by device 1 (coherent) plus device 2
/// (leakage) with the UAVs at (x1, 0), (x2, 0). Per unit time, in W.
double comp_wpt_objective(const ScenarioConfig& cfg, double x1, double x2);

struct WptHoverComp
{
  std::array<double, 2> pair{0.0, 0.0};
  double energy = 0.0;  // J per device over tau_E_total
};

/// Two-stage exhaustive search over the device-1 charging pair on
/// [-(D/2 + H), D/2 + H]^2 with |x1 - x2| >= dmin. Throws SolverError when no
/// grid point is feasible.
WptHoverComp wpt_hover_comp(const ScenarioConfig& cfg, double tau_E_total,
                            double coarse_step = 0.25, double fine_step = 0.01);

/// Uplink hover half-separation; identical to the charging closed form of the
/// interference-coordination case.
double wit_hover_comp(const ScenarioConfig& cfg);

/// Common rate (bps/Hz) for a given charging duration, energy and uplink hover.
double comp_rate_at(const ScenarioConfig& cfg, double tau_E_total, double energy, double wit_x);

HoverSolutionCoMP solve_infinite_comp(const ScenarioConfig& cfg, int grid_points = 1000,
                                      double coarse_step = 0.25, double fine_step = 0.01);

}  // namespace wpcn::analytic
