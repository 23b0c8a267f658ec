#include "doctest.h"

#include <cmath>

#include "wpcn/mc_oracle.hpp"

using namespace wpcn;
using namespace wpcn::mc;

TEST_CASE("orthogonal channels give the interference-free rate with zero variance")
{
  const ScenarioConfig c = ScenarioConfig::defaults(5.0, 4.0);
  const std::array<Point2, 2> uavs{c.devices[0], c.devices[1]};
  SamplerOptions o;
  o.zero_cross_gains = true;
  const auto r = sample_zf_rate(c, uavs, {1e-6, 2e-6}, 2000, 3, o);
  for (int k = 0; k < 2; ++k)
  {
    const double want = std::log2(1.0 + (k + 1) * 1e-6 * 1e-3 / (1e-13 * 25.0));
    CHECK(r[k].mean == doctest::Approx(want).epsilon(1e-12));
    CHECK(r[k].se < 1e-12);
  }
}

TEST_CASE("same seed, same estimate")
{
  const ScenarioConfig c = ScenarioConfig::defaults(5.0, 4.0);
  const std::array<Point2, 2> uavs{Point2{-0.5, 0.0}, Point2{0.5, 0.0}};
  const auto a = sample_zf_rate(c, uavs, {1e-6, 1e-6}, 5000, 11);
  const auto b = sample_zf_rate(c, uavs, {1e-6, 1e-6}, 5000, 11);
  const auto d = sample_zf_rate(c, uavs, {1e-6, 1e-6}, 5000, 12);
  CHECK(a[0].mean == b[0].mean);
  CHECK(a[1].se == b[1].se);
  CHECK(a[0].mean != d[0].mean);
  CHECK(a[0].samples == 5000);
  CHECK(a[0].seed == 11);
}

TEST_CASE("ZF rate stays under the bound at the symmetric example geometry")
{
  const ScenarioConfig c = ScenarioConfig::defaults(5.0, 4.0);
  const std::array<Point2, 2> uavs{Point2{-0.5, 0.0}, Point2{0.5, 0.0}};
  const auto r = sample_zf_rate(c, uavs, {1e-6, 1e-6}, 100000, 5);
  // bound by hand: log2(1 + 0.5 * 1e-6 * 1e10 * (1/29 + 1/34))
  const double bound = std::log2(1.0 + 5000.0 * (1.0 / 29.0 + 1.0 / 34.0));
  CHECK(comp_rate_upper_bound(1e-6, uavs, 0, c) == doctest::Approx(bound).epsilon(1e-12));
  CHECK(r[0].mean <= bound + 3.0 * r[0].se);
  CHECK(r[1].mean <= bound + 3.0 * r[1].se);
}

TEST_CASE("received power: coherent exact, leakage unbiased")
{
  const ScenarioConfig c = ScenarioConfig::defaults(5.0, 4.0);
  const std::array<Point2, 2> uavs{Point2{-0.5, 0.0}, Point2{0.5, 0.0}};
  const auto p = sample_received_power(c, uavs, 0, 100000, 9);
  // 0.6 * 10 * (sqrt(1e-3/29) + sqrt(1e-3/34))^2
  const double coh = 6.0 * std::pow(std::sqrt(1e-3 / 29.0) + std::sqrt(1e-3 / 34.0), 2);
  CHECK(p.coherent.mean == doctest::Approx(coh).epsilon(1e-12));
  CHECK(p.coherent.se == 0.0);
  // leakage at device 2 (x = 2.5): 6 * 1e-3 * (1/34 + 1/29)
  const double leak = 6e-3 * (1.0 / 34.0 + 1.0 / 29.0);
  CHECK(std::abs(p.leakage.mean - leak) <= 3.0 * p.leakage.se);
  CHECK(p.leakage.se > 0.0);
}

TEST_CASE("standard error shrinks as one over root samples")
{
  const ScenarioConfig c = ScenarioConfig::defaults(15.0, 4.0);
  const std::array<Point2, 2> uavs{Point2{-3.0, 1.0}, Point2{4.0, -1.0}};
  const auto a = sample_zf_rate(c, uavs, {1e-5, 1e-5}, 20000, 1);
  const auto b = sample_zf_rate(c, uavs, {1e-5, 1e-5}, 80000, 1);
  CHECK(b[0].se / a[0].se == doctest::Approx(0.5).epsilon(0.2));
}

TEST_CASE("bad sample counts are rejected")
{
  const ScenarioConfig c = ScenarioConfig::defaults(15.0, 4.0);
  const std::array<Point2, 2> uavs{Point2{-3.0, 0.0}, Point2{3.0, 0.0}};
  CHECK_THROWS_AS(sample_zf_rate(c, uavs, {1e-6, 1e-6}, 0, 1), ConfigError);
}
