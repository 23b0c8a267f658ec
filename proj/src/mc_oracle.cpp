#include "wpcn/mc_oracle.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

namespace wpcn::mc
{

namespace
{

using cd = std::complex<double>;

// Welford accumulator; the summation order is the sample order, so equal
// seeds give bit-identical estimates.
struct Accumulator
{
  long n = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double v)
  {
    ++n;
    const double d = v - mean;
    mean += d / n;
    m2 += d * (v - mean);
  }

  McEstimate finish(std::uint64_t seed) const
  {
    McEstimate e;
    e.mean = mean;
    e.samples = n;
    e.seed = seed;
    e.se = n > 1 ? std::sqrt(m2 / (n - 1) / n) : 0.0;
    return e;
  }
};

void check_samples(long samples)
{
  if (samples < 1)
    throw ConfigError("samples must be at least 1");
}

}  // namespace

std::array<McEstimate, 2> sample_zf_rate(const ScenarioConfig& cfg,
                                         const std::array<Point2, 2>& uavs,
                                         const std::array<double, 2>& Q, long samples,
                                         std::uint64_t seed, const SamplerOptions& opts)
{
  check_samples(samples);
  // amp[k][m]: link magnitude between device k and UAV m
  double amp[2][2];
  for (int k = 0; k < 2; ++k)
    for (int m = 0; m < 2; ++m)
      amp[k][m] = (opts.zero_cross_gains && k != m)
                      ? 0.0
                      : std::sqrt(channel_gain(uavs[m], cfg.devices[k], cfg));

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  std::array<Accumulator, 2> acc;
  for (long s = 0; s < samples; ++s)
  {
    // column k of Hm is device k's channel to the two UAVs
    cd Hm[2][2];
    double cond = 0.0;
    do
    {
      for (int k = 0; k < 2; ++k)
        for (int m = 0; m < 2; ++m)
          Hm[m][k] = std::polar(amp[k][m], phase(rng));
      const double fro2 = std::norm(Hm[0][0]) + std::norm(Hm[0][1]) + std::norm(Hm[1][0]) +
                          std::norm(Hm[1][1]);
      const double det = std::abs(Hm[0][0] * Hm[1][1] - Hm[0][1] * Hm[1][0]);
      // 2x2 condition number from the Frobenius norm and |det|
      const double r = fro2 / (2.0 * det);
      cond = det > 0.0 ? r + std::sqrt(std::max(r * r - 1.0, 0.0)) : INFINITY;
    } while (cond > 1e12);

    const cd det = Hm[0][0] * Hm[1][1] - Hm[0][1] * Hm[1][0];
    const cd inv[2][2] = {{Hm[1][1] / det, -Hm[0][1] / det}, {-Hm[1][0] / det, Hm[0][0] / det}};
    for (int k = 0; k < 2; ++k)
    {
      const double row_norm = std::sqrt(std::norm(inv[k][0]) + std::norm(inv[k][1]));
      const cd y = (inv[k][0] * Hm[0][k] + inv[k][1] * Hm[1][k]) / row_norm;
      acc[k].add(std::log2(1.0 + Q[k] * std::norm(y) / cfg.noise_sigma2));
    }
  }
  return {acc[0].finish(seed), acc[1].finish(seed)};
}

ReceivedPower sample_received_power(const ScenarioConfig& cfg, const std::array<Point2, 2>& uavs,
                                    int k, long samples, std::uint64_t seed)
{
  check_samples(samples);
  if (k != 0 && k != 1)
    throw ConfigError("device index must be 0 or 1");
  const int other = 1 - k;
  double amp[2][2];
  for (int j = 0; j < 2; ++j)
    for (int m = 0; m < 2; ++m)
      amp[j][m] = std::sqrt(cfg.uav_tx_power_P * channel_gain(uavs[m], cfg.devices[j], cfg));

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  Accumulator coh;
  Accumulator leak;
  for (long s = 0; s < samples; ++s)
  {
    double theta[2][2];
    for (int j = 0; j < 2; ++j)
      for (int m = 0; m < 2; ++m)
        theta[j][m] = phase(rng);
    cd at_k = 0.0;
    cd at_other = 0.0;
    for (int m = 0; m < 2; ++m)
    {
      const double phi = -theta[k][m];
      at_k += std::polar(amp[k][m], theta[k][m] + phi);
      at_other += std::polar(amp[other][m], theta[other][m] + phi);
    }
    coh.add(cfg.eh_efficiency_eta * std::norm(at_k));
    leak.add(cfg.eh_efficiency_eta * std::norm(at_other));
  }
  return {coh.finish(seed), leak.finish(seed)};
}

bool BoundCheck::holds() const
{
  for (int k = 0; k < 2; ++k)
    if (zf[k].mean > bound[k] + 3.0 * zf[k].se)
      return false;
  return true;
}

std::vector<BoundCheck> check_zf_bound(const ScenarioConfig& base, int geometries, long samples,
                                       std::uint64_t seed)
{
  check_samples(samples);
  std::vector<BoundCheck> out;
  out.reserve(geometries);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < geometries; ++i)
  {
    BoundCheck c;
    ScenarioConfig cfg = base;
    c.D = 5.0 + 25.0 * unit(rng);
    cfg.set_device_distance(c.D);
    const double H = cfg.altitude_H;
    const double half_x = c.D / 2.0 + H;
    do
    {
      for (auto& u : c.uavs)
        u = {half_x * (2.0 * unit(rng) - 1.0), H * (2.0 * unit(rng) - 1.0)};
    } while (norm(c.uavs[0] - c.uavs[1]) < cfg.min_separation);
    c.Q = std::pow(10.0, -8.0 + 4.0 * unit(rng));
    const std::uint64_t sub = seed ^ (0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(i + 1));
    c.zf = sample_zf_rate(cfg, c.uavs, {c.Q, c.Q}, samples, sub);
    for (int k = 0; k < 2; ++k)
      c.bound[k] = comp_rate_upper_bound(c.Q, c.uavs, k, cfg);
    out.push_back(c);
  }
  return out;
}

}  // namespace wpcn::mc
