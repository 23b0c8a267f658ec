#include "wpcn/analytic_ic.hpp"

#include <algorithm>
#include <cmath>

#include "golden.hpp"

namespace wpcn::analytic
{

const char* to_string(WitMode mode)
{
  return mode == WitMode::SimultaneousST ? "simultaneous" : "tdma";
}

double phi_derivative(double x, double D, double H, double tau_E, double eta, double P,
                      double beta0)
{
  const double D2 = D * D;
  const double H2 = H * H;
  const double x2 = x * x;
  const double numerator =
      x2 * x2 + 2.0 * (D2 / 4.0 + H2) * x2 - 3.0 * D2 * D2 / 16.0 + H2 * H2 - H2 * D2 / 2.0;
  const double base = x2 + D2 / 4.0 + H2;
  const double minus = base - D * x;
  const double plus = base + D * x;
  return -4.0 * eta * tau_E * beta0 * P * x * numerator / (minus * minus * plus * plus);
}

double energy_stationary_point(double D, double H)
{
  if (D <= 2.0 * H / std::sqrt(3.0))
    return 0.0;
  const double D2 = D * D;
  const double H2 = H * H;
  const double z = -(D2 / 4.0 + H2) + std::sqrt(D2 * D2 / 4.0 + H2 * D2);
  return std::sqrt(std::max(z, 0.0));
}

double symmetric_hover_x(double D, double H, double dmin)
{
  return std::max(energy_stationary_point(D, H), dmin / 2.0);
}

WptHover wpt_hover_ic(const ScenarioConfig& cfg, double tau_E)
{
  WptHover out;
  out.x = symmetric_hover_x(cfg.device_distance_D, cfg.altitude_H, cfg.min_separation);
  const Point2 uav1{-out.x, 0.0};
  const Point2 uav2{out.x, 0.0};
  out.energy = tau_E * cfg.eh_efficiency_eta * cfg.uav_tx_power_P *
               (channel_gain(uav1, cfg.devices[0], cfg) + channel_gain(uav2, cfg.devices[0], cfg));
  return out;
}

double mode1_stationarity(double y, double D, double H, double snr)
{
  const double H2 = H * H;
  const double far = (y + D / 2.0) * (y + D / 2.0) + H2;
  return (y - D / 2.0) * far * far / snr - D * (H2 + D * D / 4.0 - y * y);
}

double mode1_rate(const ScenarioConfig& cfg, double tau_E, double y, double Q)
{
  const double D = cfg.device_distance_D;
  const double H2 = cfg.altitude_H * cfg.altitude_H;
  const double signal = Q * cfg.ref_gain_beta0 / ((y - D / 2.0) * (y - D / 2.0) + H2);
  const double interference = Q * cfg.ref_gain_beta0 / ((y + D / 2.0) * (y + D / 2.0) + H2);
  const double T = cfg.mission_T;
  return (T - tau_E) / T * std::log2(1.0 + signal / (interference + cfg.noise_sigma2));
}

Mode1Hover wit_mode1_hover(const ScenarioConfig& cfg, double tau_E, double E_star)
{
  const double D = cfg.device_distance_D;
  const double H = cfg.altitude_H;
  const double half_min = cfg.min_separation / 2.0;

  Mode1Hover out;
  out.power = E_star / (cfg.mission_T - tau_E);
  out.bracket_lo = std::max(D / 2.0, half_min);
  out.bracket_hi = std::max(half_min, std::sqrt(D * D / 4.0 + H * H));

  const double snr = cfg.ref_gain_beta0 * out.power / cfg.noise_sigma2;
  auto residual = [&](double y) { return mode1_stationarity(y, D, H, snr); };

  double lo = out.bracket_lo;
  double hi = out.bracket_hi;
  double f_lo = residual(lo);
  const double f_hi = residual(hi);

  if (snr > 0.0 && hi > lo && f_lo < 0.0 && f_hi > 0.0)
  {
    for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, hi); ++it)
    {
      const double mid = 0.5 * (lo + hi);
      const double f_mid = residual(mid);
      if (f_mid == 0.0)
      {
        lo = hi = mid;
        break;
      }
      if ((f_mid < 0.0) == (f_lo < 0.0))
      {
        lo = mid;
        f_lo = f_mid;
      }
      else
        hi = mid;
    }
    out.x = 0.5 * (lo + hi);
    out.root_in_bracket = true;
    out.residual = residual(out.x);
  }
  else
  {
    const double r_lo = mode1_rate(cfg, tau_E, out.bracket_lo, out.power);
    const double r_hi = mode1_rate(cfg, tau_E, out.bracket_hi, out.power);
    out.x = r_lo >= r_hi ? out.bracket_lo : out.bracket_hi;
  }
  out.rate = mode1_rate(cfg, tau_E, out.x, out.power);
  return out;
}

double wit_mode2_rate(const ScenarioConfig& cfg, double tau_E, double E_star)
{
  const double T = cfg.mission_T;
  if (tau_E >= T)
    return 0.0;
  const double Q2 = 2.0 * E_star / (T - tau_E);
  const double H2 = cfg.altitude_H * cfg.altitude_H;
  return (T - tau_E) / (2.0 * T) *
         std::log2(1.0 + Q2 * cfg.ref_gain_beta0 / cfg.noise_sigma2 / H2);
}

HoverSolutionIC evaluate_ic(const ScenarioConfig& cfg, double tau_E)
{
  HoverSolutionIC s;
  s.tau_E = tau_E;
  const WptHover wpt = wpt_hover_ic(cfg, tau_E);
  s.wpt_hover_x = wpt.x;
  s.harvested_energy_per_device = wpt.energy;

  const Mode1Hover st = wit_mode1_hover(cfg, tau_E, wpt.energy);
  s.rate_simultaneous = st.rate;
  s.rate_tdma = wit_mode2_rate(cfg, tau_E, wpt.energy);
  if (s.rate_simultaneous > s.rate_tdma)
  {
    s.wit_mode = WitMode::SimultaneousST;
    s.wit_hover_x = st.x;
    s.common_rate = s.rate_simultaneous;
  }
  else
  {
    s.wit_mode = WitMode::TDMA;
    s.wit_hover_x = cfg.device_distance_D / 2.0;
    s.common_rate = s.rate_tdma;
  }
  return s;
}

namespace
{

// Grid over tau_E in (0, T) and golden refinement of the best cell. `eval`
// maps tau_E to a solution; its common_rate is maximised.
template <class Eval>
HoverSolutionIC search_tau(const ScenarioConfig& cfg, int grid_points, Eval&& eval)
{
  if (grid_points < 2)
    throw ConfigError("tau_grid_points: must be at least 2");
  const double T = cfg.mission_T;
  const double step = T / grid_points;

  HoverSolutionIC best;
  best.common_rate = -1.0;
  int best_index = 1;
  for (int i = 1; i < grid_points; ++i)
  {
    HoverSolutionIC s = eval(i * step);
    if (s.common_rate > best.common_rate)
    {
      best = s;
      best_index = i;
    }
  }

  const double lo = (best_index - 1) * step;
  const double hi = std::min((best_index + 1) * step, T * (1.0 - 1e-12));
  const double tau = detail::golden_section_max(
      [&](double t) { return t <= 0.0 ? 0.0 : eval(t).common_rate; }, lo, hi, 1e-10 * T);
  HoverSolutionIC refined = eval(tau);
  if (refined.common_rate > best.common_rate)
    best = refined;
  return best;
}

}  // namespace

HoverSolutionIC solve_infinite_ic(const ScenarioConfig& cfg, int grid_points)
{
  return search_tau(cfg, grid_points, [&](double tau) { return evaluate_ic(cfg, tau); });
}

HoverSolutionIC solve_infinite_ic_mode(const ScenarioConfig& cfg, WitMode mode, int grid_points)
{
  return search_tau(cfg, grid_points, [&](double tau) {
    HoverSolutionIC s = evaluate_ic(cfg, tau);
    s.wit_mode = mode;
    if (mode == WitMode::SimultaneousST)
    {
      s.wit_hover_x = wit_mode1_hover(cfg, tau, s.harvested_energy_per_device).x;
      s.common_rate = s.rate_simultaneous;
    }
    else
    {
      s.wit_hover_x = cfg.device_distance_D / 2.0;
      s.common_rate = s.rate_tdma;
    }
    return s;
  });
}

}  // namespace wpcn::analytic
