#include "doctest.h"

#include "run_config.hpp"

using namespace wpcn;
using namespace wpcn::cli;

TEST_CASE("defaults reproduce the reference scenario")
{
  const RunSettings rs = build_settings({});
  const ScenarioConfig want = ScenarioConfig::defaults(15.0, 4.0);
  CHECK(rs.scenario.altitude_H == want.altitude_H);
  CHECK(rs.scenario.noise_sigma2 == doctest::Approx(1e-13));
  CHECK(rs.scenario.ref_gain_beta0 == doctest::Approx(1e-3));
  CHECK(rs.scenario.uav_tx_power_P == doctest::Approx(10.0));
  CHECK(rs.scenario.num_slots_N == 40);
  CHECK(rs.scenario.uav_initial[0] == want.uav_initial[0]);
  CHECK(rs.scenario.uav_final[1] == want.uav_final[1]);
}

TEST_CASE("file values, then overrides")
{
  KeyValues kv = parse_key_values("# comment\naltitude_m = 3  # inline\n\nmission_time_s=10\n",
                                  "test");
  apply_overrides(kv, {"mission_time_s=20", "sweep_values=5,10,15"});
  const RunSettings rs = build_settings(kv);
  CHECK(rs.scenario.altitude_H == 3.0);
  CHECK(rs.scenario.mission_T == 20.0);
  CHECK(rs.scenario.num_slots_N == 200);
  CHECK(rs.sweep_values == std::vector<double>{5.0, 10.0, 15.0});
  CHECK(rs.scenario_at(30.0, 5.0).num_slots_N == 50);
  CHECK(rs.scenario_at(30.0, 5.0).devices[1].x == 15.0);
}

TEST_CASE("errors name the offending key")
{
  const auto message = [](const KeyValues& kv) {
    try
    {
      build_settings(kv);
    }
    catch (const ConfigError& e)
    {
      return std::string(e.what());
    }
    return std::string();
  };
  CHECK(message({{"altitude_m", "x"}}).rfind("altitude_m", 0) == 0);
  CHECK(message({{"sweep_values", "5,3"}}).rfind("sweep_values", 0) == 0);
  CHECK(message({{"num_slots", "2.5"}}).rfind("num_slots", 0) == 0);
  CHECK(message({{"mission_time_s", "0.1"}}).rfind("mission_time_s", 0) == 0);
  CHECK_THROWS_AS(parse_key_values("bogus = 1", "t"), ConfigError);
  CHECK_THROWS_AS(parse_key_values("no equals sign", "t"), ConfigError);
}
