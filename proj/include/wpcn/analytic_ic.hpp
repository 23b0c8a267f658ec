#pragma once

#include "wpcn/scenario.hpp"

namespace wpcn::analytic
{

enum class WitMode
{
  SimultaneousST,
  TDMA
};

const char* to_string(WitMode mode);

/// Infinite-horizon interference-coordination solution. During charging the
/// UAVs hover at (-wpt_hover_x, 0) and (+wpt_hover_x, 0). During uplink they
/// hover at (-wit_hover_x, 0) and (+wit_hover_x, 0) in simultaneous mode, or
/// directly above their devices in TDMA mode.
struct HoverSolutionIC
{
  double tau_E = 0.0;
  double wpt_hover_x = 0.0;
  WitMode wit_mode = WitMode::TDMA;
  double wit_hover_x = 0.0;
  double common_rate = 0.0;
  double harvested_energy_per_device = 0.0;
  double rate_simultaneous = 0.0;
  double rate_tdma = 0.0;
};

/// Derivative of the per-device harvested energy
/// tau eta P beta0 [1/((x + D/2)^2 + H^2) + 1/((x - D/2)^2 + H^2)] in x.
double phi_derivative(double x, double D, double H, double tau_E, double eta, double P,
                      double beta0);

/// Unconstrained stationary point of the two-device energy sum: zero when
/// D <= 2H/sqrt(3), otherwise sqrt(-(D^2/4 + H^2) + sqrt(D^4/4 + H^2 D^2)).
double energy_stationary_point(double D, double H);

/// Hover half-separation maximizing the per-device energy (and, for CoMP, the
/// uplink gain sum) under the separation constraint |x| >= dmin/2.
double symmetric_hover_x(double D, double H, double dmin);

struct WptHover
{
  double x = 0.0;       // UAVs at (-x, 0), (+x, 0)
  double energy = 0.0;  // J harvested by each device over tau_E
};

WptHover wpt_hover_ic(const ScenarioConfig& cfg, double tau_E);

/// Stationarity condition of the simultaneous-transmission rate with UAV 1 at
/// (-y, 0): (y - D/2)((y + D/2)^2 + H^2)^2 / snr - D(H^2 + D^2/4 - y^2), with
/// snr = beta0 Q / sigma^2. Positive beyond the rate maximizer.
double mode1_stationarity(double y, double D, double H, double snr);

/// Rate of each device in simultaneous mode (bps/Hz over the whole mission)
/// when the UAVs hover at (-y, 0) and (+y, 0) and both devices send power Q.
double mode1_rate(const ScenarioConfig& cfg, double tau_E, double y, double Q);

struct Mode1Hover
{
  double x = 0.0;  // UAV 1 at (-x, 0), UAV 2 at (+x, 0)
  double rate = 0.0;
  double power = 0.0;
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
  bool root_in_bracket = false;  // false: the better bracket endpoint was taken
  double residual = 0.0;         // stationarity residual at x when a root was found
};

Mode1Hover wit_mode1_hover(const ScenarioConfig& cfg, double tau_E, double E_star);

/// TDMA rate with each UAV directly above its device for half of the uplink time.
double wit_mode2_rate(const ScenarioConfig& cfg, double tau_E, double E_star);

/// Evaluates both uplink modes at a fixed charging duration.
HoverSolutionIC evaluate_ic(const ScenarioConfig& cfg, double tau_E);

/// Uniform grid over tau_E in (0, T) with `grid_points` cells, followed by a
/// golden-section refinement around the best cell.
HoverSolutionIC solve_infinite_ic(const ScenarioConfig& cfg, int grid_points = 1000);

/// Same search with the uplink mode held fixed.
HoverSolutionIC solve_infinite_ic_mode(const ScenarioConfig& cfg, WitMode mode,
                                       int grid_points = 1000);

}  // namespace wpcn::analytic
