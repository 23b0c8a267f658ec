#include "wpcn/sca_common.hpp"

#include <algorithm>
#include <cmath>

namespace wpcn::sca
{

const char* to_string(Initialization init)
{
  return init == Initialization::SHF ? "shf" : "direct";
}

namespace
{

enum class LegOrder
{
  Together,
  FirstUav0,
  FirstUav1
};

struct Segment
{
  double start = 0.0;
  double duration = 0.0;
  std::array<Point2, 2> from;
  std::array<Point2, 2> to;
  LegOrder order = LegOrder::Together;  // dwell segments have from == to
};

Point2 lerp(Point2 a, Point2 b, double s) { return a + std::clamp(s, 0.0, 1.0) * (b - a); }

std::array<Point2, 2> position(const Segment& seg, double t, double V)
{
  const double tau = t - seg.start;
  const double len0 = norm(seg.to[0] - seg.from[0]);
  const double len1 = norm(seg.to[1] - seg.from[1]);
  switch (seg.order)
  {
  case LegOrder::Together:
    if (seg.duration <= 0.0)
      return seg.to;
    return {lerp(seg.from[0], seg.to[0], tau / seg.duration),
            lerp(seg.from[1], seg.to[1], tau / seg.duration)};
  case LegOrder::FirstUav0:
  {
    const double t0 = len0 / V;
    return {len0 > 0 ? lerp(seg.from[0], seg.to[0], tau / t0) : seg.to[0],
            len1 > 0 ? lerp(seg.from[1], seg.to[1], (tau - t0) / (len1 / V)) : seg.to[1]};
  }
  case LegOrder::FirstUav1:
  {
    const double t1 = len1 / V;
    return {len0 > 0 ? lerp(seg.from[0], seg.to[0], (tau - t1) / (len0 / V)) : seg.to[0],
            len1 > 0 ? lerp(seg.from[1], seg.to[1], tau / t1) : seg.to[1]};
  }
  }
  return seg.to;
}

double leg_duration(const std::array<Point2, 2>& from, const std::array<Point2, 2>& to,
                    LegOrder order, double V)
{
  const double t0 = norm(to[0] - from[0]) / V;
  const double t1 = norm(to[1] - from[1]) / V;
  return order == LegOrder::Together ? std::max(t0, t1) : t0 + t1;
}

double min_separation_along(const Segment& seg, double V)
{
  constexpr int kSamples = 400;
  double best = norm(seg.from[0] - seg.from[1]);
  for (int i = 1; i <= kSamples; ++i)
  {
    const auto p = position(seg, seg.start + seg.duration * i / kSamples, V);
    best = std::min(best, norm(p[0] - p[1]));
  }
  return best;
}

}  // namespace

double flight_time(const ScenarioConfig& cfg, const std::vector<HoverStop>& stops)
{
  std::array<Point2, 2> at = cfg.uav_initial;
  double total = 0.0;
  for (const HoverStop& s : stops)
  {
    total += leg_duration(at, s.at, LegOrder::Together, cfg.max_speed);
    at = s.at;
  }
  return total + leg_duration(at, cfg.uav_final, LegOrder::Together, cfg.max_speed);
}

std::optional<Trajectory> hover_and_fly(const ScenarioConfig& cfg,
                                        const std::vector<HoverStop>& stops)
{
  const double V = cfg.max_speed;
  const double dmin = cfg.min_separation - kGeometryTolerance;
  for (const HoverStop& s : stops)
    if (norm(s.at[0] - s.at[1]) < dmin)
      return std::nullopt;

  std::vector<std::array<Point2, 2>> points{cfg.uav_initial};
  for (const HoverStop& s : stops)
    points.push_back(s.at);
  points.push_back(cfg.uav_final);

  // pick a collision-free ordering per leg
  std::vector<Segment> legs;
  double fly = 0.0;
  for (std::size_t i = 0; i + 1 < points.size(); ++i)
  {
    bool found = false;
    for (LegOrder order : {LegOrder::Together, LegOrder::FirstUav0, LegOrder::FirstUav1})
    {
      Segment seg{0.0, leg_duration(points[i], points[i + 1], order, V), points[i], points[i + 1],
                  order};
      if (min_separation_along(seg, V) >= dmin)
      {
        legs.push_back(seg);
        fly += seg.duration;
        found = true;
        break;
      }
    }
    if (!found)
      return std::nullopt;
  }
  const double T = cfg.mission_T;
  if (fly > T * (1.0 + 1e-12))
    return std::nullopt;

  double weight_sum = 0.0;
  for (const HoverStop& s : stops)
    weight_sum += s.dwell_weight;
  const double spare = std::max(0.0, T - fly);

  std::vector<Segment> timeline;
  double clock = 0.0;
  for (std::size_t i = 0; i < legs.size(); ++i)
  {
    legs[i].start = clock;
    clock += legs[i].duration;
    timeline.push_back(legs[i]);
    if (i < stops.size())
    {
      const double share = weight_sum > 0 ? stops[i].dwell_weight / weight_sum
                                          : 1.0 / static_cast<double>(stops.size());
      Segment dwell{clock, spare * share, stops[i].at, stops[i].at, LegOrder::Together};
      clock += dwell.duration;
      timeline.push_back(dwell);
    }
  }

  const int N = cfg.num_slots_N;
  Trajectory traj;
  for (int m = 0; m < 2; ++m)
    traj.q[m].resize(N + 1);
  std::size_t seg = 0;
  for (int n = 0; n <= N; ++n)
  {
    const double t = T * n / N;
    while (seg + 1 < timeline.size() && t >= timeline[seg].start + timeline[seg].duration)
      ++seg;
    const auto p = position(timeline[seg], t, V);
    traj.q[0][n] = p[0];
    traj.q[1][n] = p[1];
  }
  for (int m = 0; m < 2; ++m)
  {
    traj.q[m][0] = cfg.uav_initial[m];
    traj.q[m][N] = cfg.uav_final[m];
  }
  return traj;
}

Trajectory direct_flight(const ScenarioConfig& cfg)
{
  const int N = cfg.num_slots_N;
  Trajectory traj;
  for (int m = 0; m < 2; ++m)
  {
    traj.q[m].resize(N + 1);
    for (int n = 0; n <= N; ++n)
      traj.q[m][n] =
          lerp(cfg.uav_initial[m], cfg.uav_final[m], static_cast<double>(n) / N);
  }
  return traj;
}

}  // namespace wpcn::sca
