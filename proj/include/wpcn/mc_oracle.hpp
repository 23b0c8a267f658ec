#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "wpcn/scenario.hpp"

namespace wpcn::mc
{

struct McEstimate
{
  double mean = 0.0;
  double se = 0.0;  // sample stddev / sqrt(samples)
  long samples = 0;
  std::uint64_t seed = 0;
};

struct SamplerOptions
{
  /// Test hook: drop the UAV m -> device k != m links so the uplink becomes
  /// two parallel channels.
  bool zero_cross_gains = false;
};

/// Expected ZF rate of each device with random link phases. Receive vectors
/// are the rows of H^{-1} scaled to unit norm.
std::array<McEstimate, 2> sample_zf_rate(const ScenarioConfig& cfg,
                                         const std::array<Point2, 2>& uavs,
                                         const std::array<double, 2>& Q, long samples,
                                         std::uint64_t seed, const SamplerOptions& opts = {});

struct ReceivedPower
{
  McEstimate coherent;  // at the target device
  McEstimate leakage;   // at the other device
};

/// Harvested power while both UAVs phase-align their beams on device k.
ReceivedPower sample_received_power(const ScenarioConfig& cfg, const std::array<Point2, 2>& uavs,
                                    int k, long samples, std::uint64_t seed);

struct BoundCheck
{
  double D = 0.0;
  std::array<Point2, 2> uavs;
  double Q = 0.0;
  std::array<McEstimate, 2> zf;
  std::array<double, 2> bound{0.0, 0.0};

  /// Monte-Carlo mean within bound + 3 SE for both devices.
  bool holds() const;
};

/// Random geometry family for checking the ZF rate bound. Geometry i draws
/// D uniform in [5, 30] m, both UAVs uniform in [-(D/2 + H), D/2 + H] x [-H, H]
/// at least dmin apart, and one device power log-uniform in [1e-8, 1e-4] W.
/// Every other parameter comes from `base`.
std::vector<BoundCheck> check_zf_bound(const ScenarioConfig& base, int geometries, long samples,
                                       std::uint64_t seed);

}  // namespace wpcn::mc
