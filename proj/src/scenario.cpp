#include "wpcn/scenario.hpp"

#include <algorithm>
#include <limits>
#include <numbers>
#include <sstream>

namespace wpcn
{

void ScenarioConfig::set_device_distance(double D)
{
  device_distance_D = D;
  devices = {Point2{-D / 2.0, 0.0}, Point2{D / 2.0, 0.0}};
}

namespace
{

void require(bool condition, const std::string& key, const std::string& what)
{
  if (!condition)
    throw ConfigError(key + ": " + what);
}

}  // namespace

void ScenarioConfig::validate() const
{
  auto finite = [](double v) { return std::isfinite(v); };
  require(finite(altitude_H) && altitude_H > 0.0, "altitude_m", "must be positive");
  require(finite(device_distance_D) && device_distance_D >= 0.0, "device_distance_m",
          "must be non-negative");
  require(finite(uav_tx_power_P) && uav_tx_power_P > 0.0, "uav_power_dbm", "must be positive");
  require(finite(eh_efficiency_eta) && eh_efficiency_eta > 0.0 && eh_efficiency_eta <= 1.0,
          "eh_efficiency", "must lie in (0, 1]");
  require(finite(ref_gain_beta0) && ref_gain_beta0 > 0.0, "ref_gain_db", "must be positive");
  require(finite(noise_sigma2) && noise_sigma2 > 0.0, "noise_dbm", "must be positive");
  require(finite(max_speed) && max_speed > 0.0, "max_speed_mps", "must be positive");
  require(finite(min_separation) && min_separation > 0.0, "min_separation_m",
          "must be positive");
  require(finite(mission_T) && mission_T > 0.0, "mission_time_s", "must be positive");
  require(num_slots_N >= 1, "num_slots", "must be at least 1");

  for (int m = 0; m < 2; ++m)
  {
    const std::string name = "uav" + std::to_string(m + 1);
    const double travel = norm(uav_final[m] - uav_initial[m]);
    if (mission_T * max_speed < travel - kGeometryTolerance)
    {
      std::ostringstream os;
      os << "mission too short for " << name << ": needs " << travel / max_speed << " s";
      throw ConfigError("mission_time_s: " + os.str());
    }
  }
  require(norm(uav_initial[0] - uav_initial[1]) >= min_separation - kGeometryTolerance,
          "uav1_initial_x_m", "initial UAV positions closer than the minimum separation");
  require(norm(uav_final[0] - uav_final[1]) >= min_separation - kGeometryTolerance,
          "uav1_final_x_m", "final UAV positions closer than the minimum separation");
}

ScenarioConfig ScenarioConfig::defaults(double D, double T)
{
  ScenarioConfig cfg;
  cfg.altitude_H = 5.0;
  cfg.noise_sigma2 = dbm_to_watt(-100.0);
  cfg.ref_gain_beta0 = db_to_linear(-30.0);
  cfg.uav_tx_power_P = dbm_to_watt(40.0);
  cfg.eh_efficiency_eta = 0.6;
  cfg.max_speed = 5.0;
  cfg.min_separation = 1.0;
  cfg.mission_T = T;
  cfg.num_slots_N = std::max(1, static_cast<int>(std::lround(T / 0.1)));
  cfg.set_device_distance(D);
  cfg.uav_initial = {Point2{-2.0, -2.0}, Point2{2.0, -2.0}};
  cfg.uav_final = {Point2{-2.0, 2.0}, Point2{2.0, 2.0}};
  return cfg;
}

AllocationIC AllocationIC::zeros(int N)
{
  AllocationIC a;
  a.delta_E.assign(N, 0.0);
  a.delta_I.assign(N, 0.0);
  a.Q = {std::vector<double>(N, 0.0), std::vector<double>(N, 0.0)};
  return a;
}

AllocationCoMP AllocationCoMP::zeros(int N)
{
  AllocationCoMP a;
  a.rho_E = {std::vector<double>(N, 0.0), std::vector<double>(N, 0.0)};
  a.rho_I.assign(N, 0.0);
  a.Q = {std::vector<double>(N, 0.0), std::vector<double>(N, 0.0)};
  return a;
}

double channel_gain(Point2 q, Point2 w, const ScenarioConfig& cfg)
{
  return cfg.ref_gain_beta0 / (squared_norm(q - w) + cfg.altitude_H * cfg.altitude_H);
}

double harvested_energy_ic(const AllocationIC& alloc, const Trajectory& traj, int k,
                           const ScenarioConfig& cfg)
{
  const int N = traj.num_slots();
  double total = 0.0;
  for (int n = 1; n <= N; ++n)
  {
    const double dE = alloc.delta_E[n - 1];
    if (dE == 0.0)
      continue;
    const double gains = channel_gain(traj.q[0][n], cfg.devices[k], cfg) +
                         channel_gain(traj.q[1][n], cfg.devices[k], cfg);
    total += cfg.eh_efficiency_eta * cfg.uav_tx_power_P * dE * gains;
  }
  return total;
}

double sinr_ic(std::array<double, 2> Q, std::array<Point2, 2> uavs, int k,
               const ScenarioConfig& cfg)
{
  const int kb = 1 - k;
  const double signal = Q[k] * channel_gain(uavs[k], cfg.devices[k], cfg);
  const double interference = Q[kb] * channel_gain(uavs[k], cfg.devices[kb], cfg);
  return signal / (interference + cfg.noise_sigma2);
}

std::array<double, 2> device_rates_ic(const AllocationIC& alloc, const Trajectory& traj,
                                      const ScenarioConfig& cfg)
{
  const int N = traj.num_slots();
  std::array<double, 2> rates{0.0, 0.0};
  for (int n = 1; n <= N; ++n)
  {
    const double dI = alloc.delta_I[n - 1];
    if (dI == 0.0)
      continue;
    const std::array<double, 2> Q{alloc.Q[0][n - 1], alloc.Q[1][n - 1]};
    for (int k = 0; k < 2; ++k)
      rates[k] += dI * std::log2(1.0 + sinr_ic(Q, traj.at(n), k, cfg));
  }
  for (double& r : rates)
    r /= cfg.mission_T;
  return rates;
}

double common_throughput_ic(const AllocationIC& alloc, const Trajectory& traj,
                            const ScenarioConfig& cfg)
{
  const auto r = device_rates_ic(alloc, traj, cfg);
  return std::min(r[0], r[1]);
}

double energy_neutrality_residual_ic(const AllocationIC& alloc, const Trajectory& traj, int k,
                                     const ScenarioConfig& cfg)
{
  double spent = 0.0;
  for (std::size_t i = 0; i < alloc.delta_I.size(); ++i)
    spent += alloc.Q[k][i] * alloc.delta_I[i];
  return harvested_energy_ic(alloc, traj, k, cfg) - spent;
}

double comp_coherent_power(std::array<Point2, 2> uavs, int k, const ScenarioConfig& cfg)
{
  const double amp = std::sqrt(channel_gain(uavs[0], cfg.devices[k], cfg)) +
                     std::sqrt(channel_gain(uavs[1], cfg.devices[k], cfg));
  return cfg.eh_efficiency_eta * cfg.uav_tx_power_P * amp * amp;
}

double comp_noncoherent_power(std::array<Point2, 2> uavs, int k, const ScenarioConfig& cfg)
{
  return cfg.eh_efficiency_eta * cfg.uav_tx_power_P *
         (channel_gain(uavs[0], cfg.devices[k], cfg) + channel_gain(uavs[1], cfg.devices[k], cfg));
}

double harvested_energy_comp(const AllocationCoMP& alloc, const Trajectory& traj, int k,
                             const ScenarioConfig& cfg)
{
  const int N = traj.num_slots();
  const int kb = 1 - k;
  double total = 0.0;
  for (int n = 1; n <= N; ++n)
  {
    const double own = alloc.rho_E[k][n - 1];
    const double other = alloc.rho_E[kb][n - 1];
    if (own != 0.0)
      total += own * comp_coherent_power(traj.at(n), k, cfg);
    if (other != 0.0)
      total += other * comp_noncoherent_power(traj.at(n), k, cfg);
  }
  return total;
}

double comp_rate_upper_bound(double Q_k, std::array<Point2, 2> uavs, int k,
                             const ScenarioConfig& cfg)
{
  const double gains = channel_gain(uavs[0], cfg.devices[k], cfg) +
                       channel_gain(uavs[1], cfg.devices[k], cfg);
  return std::log2(1.0 + 0.5 * Q_k * gains / cfg.noise_sigma2);
}

std::array<double, 2> device_rates_comp(const AllocationCoMP& alloc, const Trajectory& traj,
                                        const ScenarioConfig& cfg)
{
  const int N = traj.num_slots();
  std::array<double, 2> rates{0.0, 0.0};
  for (int n = 1; n <= N; ++n)
  {
    const double rI = alloc.rho_I[n - 1];
    if (rI == 0.0)
      continue;
    for (int k = 0; k < 2; ++k)
      rates[k] += rI * comp_rate_upper_bound(alloc.Q[k][n - 1], traj.at(n), k, cfg);
  }
  for (double& r : rates)
    r /= cfg.mission_T;
  return rates;
}

double common_throughput_comp(const AllocationCoMP& alloc, const Trajectory& traj,
                              const ScenarioConfig& cfg)
{
  const auto r = device_rates_comp(alloc, traj, cfg);
  return std::min(r[0], r[1]);
}

double energy_neutrality_residual_comp(const AllocationCoMP& alloc, const Trajectory& traj, int k,
                                       const ScenarioConfig& cfg)
{
  double spent = 0.0;
  for (std::size_t i = 0; i < alloc.rho_I.size(); ++i)
    spent += alloc.Q[k][i] * alloc.rho_I[i];
  return harvested_energy_comp(alloc, traj, k, cfg) - spent;
}

bool FeasibilityReport::trajectory_ok() const
{
  return endpoint_error <= kGeometryTolerance && speed_violation <= kGeometryTolerance &&
         separation_violation <= kGeometryTolerance;
}

bool FeasibilityReport::ok() const
{
  return trajectory_ok() && time_violation <= kTimeTolerance && power_violation <= 0.0 &&
         energy_residual[0] >= -kEnergyTolerance && energy_residual[1] >= -kEnergyTolerance;
}

double FeasibilityReport::max_violation() const
{
  return std::max({endpoint_error, speed_violation, separation_violation, time_violation,
                   power_violation, -energy_residual[0], -energy_residual[1], 0.0});
}

FeasibilityReport check_trajectory(const Trajectory& traj, const ScenarioConfig& cfg)
{
  FeasibilityReport r;
  const int N = traj.num_slots();
  if (N != cfg.num_slots_N || traj.q[1].size() != traj.q[0].size())
    throw ConfigError("trajectory: slot count does not match num_slots");
  for (int m = 0; m < 2; ++m)
  {
    r.endpoint_error = std::max({r.endpoint_error, norm(traj.q[m][0] - cfg.uav_initial[m]),
                                 norm(traj.q[m][N] - cfg.uav_final[m])});
    for (int n = 0; n < N; ++n)
      r.speed_violation =
          std::max(r.speed_violation, norm(traj.q[m][n + 1] - traj.q[m][n]) - cfg.max_step());
  }
  for (int n = 0; n <= N; ++n)
    r.separation_violation =
        std::max(r.separation_violation, cfg.min_separation - norm(traj.q[0][n] - traj.q[1][n]));
  return r;
}

FeasibilityReport check_ic(const AllocationIC& alloc, const Trajectory& traj,
                           const ScenarioConfig& cfg)
{
  FeasibilityReport r = check_trajectory(traj, cfg);
  const double slot = cfg.slot();
  for (int i = 0; i < cfg.num_slots_N; ++i)
  {
    r.time_violation = std::max({r.time_violation, -alloc.delta_E[i], -alloc.delta_I[i],
                                 alloc.delta_E[i] + alloc.delta_I[i] - slot});
    r.power_violation = std::max({r.power_violation, -alloc.Q[0][i], -alloc.Q[1][i]});
  }
  for (int k = 0; k < 2; ++k)
    r.energy_residual[k] = energy_neutrality_residual_ic(alloc, traj, k, cfg);
  return r;
}

FeasibilityReport check_comp(const AllocationCoMP& alloc, const Trajectory& traj,
                             const ScenarioConfig& cfg)
{
  FeasibilityReport r = check_trajectory(traj, cfg);
  const double slot = cfg.slot();
  for (int i = 0; i < cfg.num_slots_N; ++i)
  {
    r.time_violation =
        std::max({r.time_violation, -alloc.rho_E[0][i], -alloc.rho_E[1][i], -alloc.rho_I[i],
                  alloc.rho_E[0][i] + alloc.rho_E[1][i] + alloc.rho_I[i] - slot});
    r.power_violation = std::max({r.power_violation, -alloc.Q[0][i], -alloc.Q[1][i]});
  }
  for (int k = 0; k < 2; ++k)
    r.energy_residual[k] = energy_neutrality_residual_comp(alloc, traj, k, cfg);
  return r;
}

}  // namespace wpcn
