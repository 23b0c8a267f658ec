#include "doctest.h"

#include <cmath>

#include "wpcn/sca_common.hpp"

using namespace wpcn;
using namespace wpcn::sca;

namespace
{

void check_path(const Trajectory& t, const ScenarioConfig& c)
{
  REQUIRE(t.num_slots() == c.num_slots_N);
  for (int m = 0; m < 2; ++m)
  {
    CHECK(t.q[m].front() == c.uav_initial[m]);
    CHECK(t.q[m].back() == c.uav_final[m]);
    for (int n = 1; n <= c.num_slots_N; ++n)
      CHECK(norm(t.q[m][n] - t.q[m][n - 1]) <= c.max_step() + 1e-9);
  }
  for (int n = 0; n <= c.num_slots_N; ++n)
    CHECK(norm(t.q[0][n] - t.q[1][n]) >= c.min_separation - 1e-9);
}

}  // namespace

TEST_CASE("direct flight is a straight constant-speed path")
{
  const ScenarioConfig c = ScenarioConfig::defaults(15.0, 4.0);
  const Trajectory t = direct_flight(c);
  check_path(t, c);
  CHECK(t.q[0][20].x == doctest::Approx(-2.0));
  CHECK(t.q[0][20].y == doctest::Approx(0.0));
  CHECK(t.q[1][10].y == doctest::Approx(-1.0));
}

TEST_CASE("hover-and-fly visits every stop and respects the limits")
{
  const ScenarioConfig c = ScenarioConfig::defaults(15.0, 10.0);
  const std::vector<HoverStop> stops{{{Point2{-6.0, 0.0}, Point2{6.0, 0.0}}, 1.0},
                                     {{Point2{-3.0, 0.0}, Point2{3.0, 0.0}}, 3.0}};
  const auto t = hover_and_fly(c, stops);
  REQUIRE(t.has_value());
  check_path(*t, c);
  for (const auto& s : stops)
    for (int m = 0; m < 2; ++m)
    {
      double closest = 1e9;
      for (const Point2& p : t->q[m])
        closest = std::min(closest, norm(p - s.at[m]));
      CHECK(closest <= c.max_step());
    }
}

TEST_CASE("flight time and the too-short mission")
{
  const ScenarioConfig c = ScenarioConfig::defaults(15.0, 2.0);
  const std::vector<HoverStop> stops{{{Point2{-7.5, 0.0}, Point2{7.5, 0.0}}, 1.0}};
  // longest leg: (-2,-2) -> (-7.5,0) and back to (-2,2), each sqrt(5.5^2+2^2)
  const double leg = std::sqrt(5.5 * 5.5 + 4.0);
  CHECK(flight_time(c, stops) == doctest::Approx(2.0 * leg / 5.0));
  CHECK_FALSE(hover_and_fly(c, stops).has_value());
}

TEST_CASE("crossing legs are flown one UAV at a time")
{
  ScenarioConfig c = ScenarioConfig::defaults(15.0, 20.0);
  // both UAVs pass through the same point on their way to swapped places
  const std::vector<HoverStop> stops{{{Point2{2.0, 0.0}, Point2{-2.0, 0.0}}, 1.0}};
  const auto t = hover_and_fly(c, stops);
  REQUIRE(t.has_value());
  check_path(*t, c);
}
