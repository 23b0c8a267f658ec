#include "wpcn/analytic_comp.hpp"

#include <algorithm>
#include <cmath>

#include "golden.hpp"
#include "wpcn/analytic_ic.hpp"

namespace wpcn::analytic
{

double comp_wpt_objective(const ScenarioConfig& cfg, double x1, double x2)
{
  const std::array<Point2, 2> uavs{Point2{x1, 0.0}, Point2{x2, 0.0}};
  return comp_coherent_power(uavs, 0, cfg) + comp_noncoherent_power(uavs, 1, cfg);
}

namespace
{

struct PairSearch
{
  double x1 = 0.0;
  double gap = 0.0;
  double value = -1.0;
  bool found = false;
};

// Scans x1 over [x1_lo, x1_hi] and x2 = x1 + gap with gap in [gap_lo, gap_hi],
// keeping x2 <= bound. Canonical ordering x1 <= x2 is enough by symmetry.
PairSearch scan(const ScenarioConfig& cfg, double x1_lo, double x1_hi, double gap_lo,
                double gap_hi, double step, double bound)
{
  PairSearch best;
  const int n1 = static_cast<int>(std::floor((x1_hi - x1_lo) / step + 1e-9));
  const int ng = static_cast<int>(std::floor((gap_hi - gap_lo) / step + 1e-9));
  for (int i = 0; i <= n1; ++i)
  {
    const double x1 = x1_lo + i * step;
    for (int j = 0; j <= ng; ++j)
    {
      const double gap = gap_lo + j * step;
      const double x2 = x1 + gap;
      if (x2 > bound + 1e-12)
        break;
      const double v = comp_wpt_objective(cfg, x1, x2);
      if (v > best.value)
        best = {x1, gap, v, true};
    }
  }
  return best;
}

}  // namespace

WptHoverComp wpt_hover_comp(const ScenarioConfig& cfg, double tau_E_total, double coarse_step,
                            double fine_step)
{
  if (!(coarse_step > 0.0) || !(fine_step > 0.0))
    throw ConfigError("hover_grid_step: must be positive");
  const double bound = cfg.device_distance_D / 2.0 + cfg.altitude_H;
  const double dmin = cfg.min_separation;

  PairSearch coarse = scan(cfg, -bound, bound - dmin, dmin, 2.0 * bound, coarse_step, bound);
  if (!coarse.found)
    throw SolverError("wpt_hover_comp: no feasible grid point (grid too coarse for dmin)");

  const double x1_lo = std::max(-bound, coarse.x1 - coarse_step);
  const double x1_hi = std::min(bound - dmin, coarse.x1 + coarse_step);
  const double gap_lo = std::max(dmin, coarse.gap - coarse_step);
  const double gap_hi = std::min(2.0 * bound, coarse.gap + coarse_step);
  PairSearch fine = scan(cfg, x1_lo, x1_hi, gap_lo, gap_hi, fine_step, bound);
  const PairSearch& best = fine.value >= coarse.value ? fine : coarse;

  WptHoverComp out;
  out.pair = {best.x1, best.x1 + best.gap};
  out.energy = tau_E_total / 2.0 * best.value;
  return out;
}

double wit_hover_comp(const ScenarioConfig& cfg)
{
  return symmetric_hover_x(cfg.device_distance_D, cfg.altitude_H, cfg.min_separation);
}

double comp_rate_at(const ScenarioConfig& cfg, double tau_E_total, double energy, double wit_x)
{
  const double T = cfg.mission_T;
  const double tau_I = T - tau_E_total;
  if (tau_I <= 0.0)
    return 0.0;
  const double Q = energy / tau_I;
  const std::array<Point2, 2> uavs{Point2{-wit_x, 0.0}, Point2{wit_x, 0.0}};
  return tau_I / T * comp_rate_upper_bound(Q, uavs, 0, cfg);
}

HoverSolutionCoMP solve_infinite_comp(const ScenarioConfig& cfg, int grid_points,
                                      double coarse_step, double fine_step)
{
  if (grid_points < 2)
    throw ConfigError("tau_grid_points: must be at least 2");
  const double T = cfg.mission_T;

  // The charging pair does not depend on the charging duration: energy is
  // linear in tau_E_total.
  const WptHoverComp unit = wpt_hover_comp(cfg, 1.0, coarse_step, fine_step);
  const double wit_x = wit_hover_comp(cfg);
  auto rate = [&](double tau) { return comp_rate_at(cfg, tau, unit.energy * tau, wit_x); };

  const double step = T / grid_points;
  int best_index = 1;
  double best_rate = -1.0;
  for (int i = 1; i < grid_points; ++i)
  {
    const double r = rate(i * step);
    if (r > best_rate)
    {
      best_rate = r;
      best_index = i;
    }
  }
  double tau = best_index * step;
  const double lo = (best_index - 1) * step;
  const double hi = std::min((best_index + 1) * step, T * (1.0 - 1e-12));
  const double refined = detail::golden_section_max(
      [&](double t) { return t <= 0.0 ? 0.0 : rate(t); }, lo, hi, 1e-10 * T);
  if (rate(refined) > best_rate)
    tau = refined;

  HoverSolutionCoMP s;
  s.tau_E_total = tau;
  s.wpt_pair = unit.pair;
  s.wit_hover_x = wit_x;
  s.harvested_energy_per_device = unit.energy * tau;
  s.Q_comp = s.harvested_energy_per_device / (T - tau);
  s.common_rate = rate(tau);
  return s;
}

}  // namespace wpcn::analytic
