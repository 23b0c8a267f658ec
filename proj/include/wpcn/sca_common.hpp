#pragma once

#include <array>
#include <optional>
#include <vector>

#include "wpcn/convex.hpp"
#include "wpcn/scenario.hpp"

namespace wpcn::sca
{

enum class Initialization
{
  SHF,
  DirectFlight
};

const char* to_string(Initialization init);

struct ScaOptions
{
  double outer_tol = 1e-4;   // relative outer improvement that ends the alternation
  int max_outer = 50;
  int max_inner = 30;        // SCA passes per power or trajectory update
  double inner_tol = 1e-6;   // relative improvement that ends an SCA pass
  int max_trust_halvings = 8;
  bool optimize_trajectory = true;  // false keeps the initial trajectory fixed
  std::optional<Initialization> force_init;
  convex::BarrierOptions barrier;
};

/// One stop of a hover-and-fly schedule: the two UAV positions and the share
/// of the spare mission time spent hovering there.
struct HoverStop
{
  std::array<Point2, 2> at;
  double dwell_weight = 1.0;
};

/// Flies both UAVs through `stops` at maximum speed and hovers at each stop
/// for its share of T - T_fly. Each leg starts together and ends together;
/// when that brings the UAVs closer than dmin the leg is flown one UAV at a
/// time. Returns nullopt when T < T_fly or no ordering keeps the separation.
std::optional<Trajectory> hover_and_fly(const ScenarioConfig& cfg,
                                        const std::vector<HoverStop>& stops);

/// Minimum time needed to fly through the stops (ignoring collisions).
double flight_time(const ScenarioConfig& cfg, const std::vector<HoverStop>& stops);

/// Straight constant-speed flight from the initial to the final locations.
Trajectory direct_flight(const ScenarioConfig& cfg);

}  // namespace wpcn::sca
