#include "doctest.h"

#include <cmath>
#include <random>

#include "wpcn/analytic_comp.hpp"
#include "wpcn/analytic_ic.hpp"

using namespace wpcn;
using namespace wpcn::analytic;

namespace
{

// Full 2D brute force over the charging pair, no refinement.
double brute_force_pair_value(const ScenarioConfig& cfg, double step)
{
  const double bound = cfg.device_distance_D / 2 + cfg.altitude_H;
  const int n = static_cast<int>(2 * bound / step);
  double best = -1.0;
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= n; ++j)
    {
      const double x1 = -bound + i * step;
      const double x2 = -bound + j * step;
      if (std::abs(x1 - x2) < cfg.min_separation)
        continue;
      const std::array<Point2, 2> u{Point2{x1, 0.0}, Point2{x2, 0.0}};
      best = std::max(best, comp_coherent_power(u, 0, cfg) + comp_noncoherent_power(u, 1, cfg));
    }
  return best;
}

double uplink_gain_sum(double x, double D, double H)
{
  return 1.0 / ((x - D / 2) * (x - D / 2) + H * H) + 1.0 / ((x + D / 2) * (x + D / 2) + H * H);
}

}  // namespace

TEST_CASE("charging pair clusters near the charged device for tiny dmin")
{
  ScenarioConfig cfg = ScenarioConfig::defaults(15.0, 100.0);
  cfg.min_separation = 1e-3;
  const WptHoverComp w = wpt_hover_comp(cfg, 10.0);
  CHECK(std::abs(w.pair[0] + 7.5) < 1.0);
  CHECK(std::abs(w.pair[1] + 7.5) < 1.0);
}

TEST_CASE("two-stage pair search against a full grid")
{
  for (double D : {5.0, 15.0})
  {
    const ScenarioConfig cfg = ScenarioConfig::defaults(D, 100.0);
    const WptHoverComp w = wpt_hover_comp(cfg, 1.0);
    const double brute = brute_force_pair_value(cfg, 0.01);
    CHECK(2.0 * w.energy >= brute * (1.0 - 1e-4));
    CHECK(std::abs(w.pair[1] - w.pair[0]) >= cfg.min_separation - 1e-12);
  }
}

TEST_CASE("coherent charging beats independent charging")
{
  const ScenarioConfig cfg = ScenarioConfig::defaults(15.0, 100.0);
  const double tau = 10.0;
  CHECK(wpt_hover_comp(cfg, tau).energy >= wpt_hover_ic(cfg, tau).energy);
}

TEST_CASE("grid too coarse for the separation")
{
  ScenarioConfig cfg = ScenarioConfig::defaults(1.0, 100.0);
  cfg.altitude_H = 0.5;
  cfg.min_separation = 2.5;
  CHECK_THROWS_AS(wpt_hover_comp(cfg, 1.0, 1.0, 0.5), SolverError);
}

TEST_CASE("uplink hover")
{
  CHECK(wit_hover_comp(ScenarioConfig::defaults(5.0)) == 0.5);
  const double x = wit_hover_comp(ScenarioConfig::defaults(15.0));
  CHECK(x == doctest::Approx(7.3456).epsilon(1e-4));
  CHECK(x == wpt_hover_ic(ScenarioConfig::defaults(15.0), 1.0).x);

  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> uD(0.5, 40.0);
  std::uniform_real_distribution<double> uH(1.0, 25.0);
  std::uniform_real_distribution<double> ud(0.1, 6.0);
  for (int i = 0; i < 100; ++i)
  {
    ScenarioConfig cfg = ScenarioConfig::defaults(uD(rng));
    cfg.altitude_H = uH(rng);
    cfg.min_separation = ud(rng);
    const double D = cfg.device_distance_D;
    const double H = cfg.altitude_H;
    const double lo = cfg.min_separation / 2;
    const double hi = std::max(lo, D / 2 + H);
    double best_x = lo;
    double best = -1.0;
    for (double y = lo; y <= hi; y += 1e-4)
    {
      const double v = uplink_gain_sum(y, D, H);
      if (v > best)
      {
        best = v;
        best_x = y;
      }
    }
    CHECK(std::abs(wit_hover_comp(cfg) - best_x) < 1e-3);
  }
}

TEST_CASE("CoMP beats interference coordination; the gap narrows with D")
{
  const HoverSolutionCoMP c15 = solve_infinite_comp(ScenarioConfig::defaults(15.0, 100.0));
  const HoverSolutionIC i15 = solve_infinite_ic(ScenarioConfig::defaults(15.0, 100.0));
  const HoverSolutionCoMP c30 = solve_infinite_comp(ScenarioConfig::defaults(30.0, 100.0));
  const HoverSolutionIC i30 = solve_infinite_ic(ScenarioConfig::defaults(30.0, 100.0));
  CHECK(c15.common_rate >= i15.common_rate);
  CHECK(c30.common_rate >= i30.common_rate);
  CHECK(c30.common_rate - i30.common_rate < c15.common_rate - i15.common_rate);
}

TEST_CASE("CoMP grid refinement stability")
{
  const ScenarioConfig cfg = ScenarioConfig::defaults(15.0, 100.0);
  const double r1 = solve_infinite_comp(cfg, 1000).common_rate;
  const double r2 = solve_infinite_comp(cfg, 2000).common_rate;
  CHECK(std::abs(r1 - r2) < 1e-3);
}

TEST_CASE("CoMP rate reproduced by the model")
{
  for (double D : {5.0, 15.0, 30.0})
  {
    const ScenarioConfig cfg = ScenarioConfig::defaults(D, 100.0);
    const HoverSolutionCoMP s = solve_infinite_comp(cfg);
    const double T = cfg.mission_T;
    const double x1 = s.wpt_pair[0];
    const double x2 = s.wpt_pair[1];

    Trajectory t;
    t.q[0] = {Point2{x1, 0.0}, Point2{x1, 0.0}, Point2{-x2, 0.0}, Point2{-s.wit_hover_x, 0.0}};
    t.q[1] = {Point2{x2, 0.0}, Point2{x2, 0.0}, Point2{-x1, 0.0}, Point2{s.wit_hover_x, 0.0}};
    AllocationCoMP a = AllocationCoMP::zeros(3);
    a.rho_E[0][0] = s.tau_E_total / 2;
    a.rho_E[1][1] = s.tau_E_total / 2;
    a.rho_I[2] = T - s.tau_E_total;
    for (int k = 0; k < 2; ++k)
      a.Q[k][2] = s.Q_comp;

    const auto rates = device_rates_comp(a, t, cfg);
    CHECK(rates[0] == doctest::Approx(s.common_rate).epsilon(1e-9));
    CHECK(rates[1] == doctest::Approx(s.common_rate).epsilon(1e-9));
    for (int k = 0; k < 2; ++k)
    {
      CHECK(harvested_energy_comp(a, t, k, cfg) ==
            doctest::Approx(s.harvested_energy_per_device).epsilon(1e-9));
      CHECK(std::abs(energy_neutrality_residual_comp(a, t, k, cfg)) <
            1e-9 * s.harvested_energy_per_device);
    }
    CHECK(s.wit_hover_x <= std::max(D / 2, 0.5) + 1e-12);
  }
}
