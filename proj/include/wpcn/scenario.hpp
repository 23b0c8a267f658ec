#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace wpcn
{

struct Point2
{
  double x = 0.0;
  double y = 0.0;

  friend Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Point2 operator*(double s, Point2 a) { return {s * a.x, s * a.y}; }
  friend Point2 operator-(Point2 a) { return {-a.x, -a.y}; }
  friend bool operator==(Point2 a, Point2 b) = default;
};

inline double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
inline double squared_norm(Point2 a) { return dot(a, a); }
inline double norm(Point2 a) { return std::sqrt(squared_norm(a)); }

/// Raised for malformed or physically inconsistent scenario inputs.
class ConfigError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// Raised when a numerical solver cannot produce a usable result.
class SolverError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

// Feasibility tolerances shared by validators and solvers.
inline constexpr double kTimeTolerance = 1e-9;
inline constexpr double kEnergyTolerance = 1e-9;
inline constexpr double kGeometryTolerance = 1e-6;

inline double dbm_to_watt(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

/// Physical and mission constants of the two-UAV, two-device network.
/// All quantities are linear SI units.
struct ScenarioConfig
{
  double altitude_H = 5.0;          // m
  double device_distance_D = 15.0;  // m
  std::array<Point2, 2> devices{Point2{-7.5, 0.0}, Point2{7.5, 0.0}};
  double uav_tx_power_P = 10.0;     // W (40 dBm)
  double eh_efficiency_eta = 0.6;
  double ref_gain_beta0 = 1e-3;     // -30 dB
  double noise_sigma2 = 1e-13;      // W (-100 dBm)
  double max_speed = 5.0;           // m/s
  double min_separation = 1.0;      // m
  double mission_T = 4.0;           // s
  int num_slots_N = 40;
  std::array<Point2, 2> uav_initial{Point2{-2.0, -2.0}, Point2{2.0, -2.0}};
  std::array<Point2, 2> uav_final{Point2{-2.0, 2.0}, Point2{2.0, 2.0}};

  double slot() const { return mission_T / num_slots_N; }
  /// Maximum displacement per slot.
  double max_step() const { return max_speed * slot(); }

  /// Places the devices at (-D/2, 0) and (D/2, 0).
  void set_device_distance(double D);

  /// Throws ConfigError naming the first violated invariant.
  void validate() const;

  /// Simulation parameters used throughout the numerical study: H = 5 m,
  /// sigma^2 = -100 dBm, beta0 = -30 dB, P = 40 dBm, eta = 0.6, V = 5 m/s,
  /// dmin = 1 m, endpoints (-2,-2)->(-2,2) and (2,-2)->(2,2), slot 0.1 s.
  static ScenarioConfig defaults(double D = 15.0, double T = 4.0);
};

/// Slot-boundary positions of both UAVs; q[m][0] is the initial location and
/// q[m][N] the final one. Slot n (1..N) is evaluated at q[m][n].
struct Trajectory
{
  std::array<std::vector<Point2>, 2> q;

  int num_slots() const { return static_cast<int>(q[0].size()) - 1; }
  std::array<Point2, 2> at(int n) const { return {q[0][n], q[1][n]}; }
};

/// Per-slot time split and device powers for interference coordination.
/// Index i holds slot i+1.
struct AllocationIC
{
  std::vector<double> delta_E;
  std::vector<double> delta_I;
  std::array<std::vector<double>, 2> Q;

  static AllocationIC zeros(int N);
};

/// Per-slot CoMP allocation: energy-beamforming sub-slots toward each device,
/// the joint-reception sub-slot and device powers. Index i holds slot i+1.
struct AllocationCoMP
{
  std::array<std::vector<double>, 2> rho_E;
  std::vector<double> rho_I;
  std::array<std::vector<double>, 2> Q;

  static AllocationCoMP zeros(int N);
};

// ---- model evaluations ----------------------------------------------------

/// beta0 / (|q - w|^2 + H^2).
double channel_gain(Point2 q, Point2 w, const ScenarioConfig& cfg);

double harvested_energy_ic(const AllocationIC& alloc, const Trajectory& traj, int k,
                           const ScenarioConfig& cfg);

/// SINR of device k at UAV k with the two UAVs at `uavs`.
double sinr_ic(std::array<double, 2> Q, std::array<Point2, 2> uavs, int k,
               const ScenarioConfig& cfg);

std::array<double, 2> device_rates_ic(const AllocationIC& alloc, const Trajectory& traj,
                                      const ScenarioConfig& cfg);
double common_throughput_ic(const AllocationIC& alloc, const Trajectory& traj,
                            const ScenarioConfig& cfg);
double energy_neutrality_residual_ic(const AllocationIC& alloc, const Trajectory& traj, int k,
                                     const ScenarioConfig& cfg);

/// Received power at device k when both UAVs phase-align toward it.
double comp_coherent_power(std::array<Point2, 2> uavs, int k, const ScenarioConfig& cfg);
/// Received power at device k without phase alignment (the leakage level).
double comp_noncoherent_power(std::array<Point2, 2> uavs, int k, const ScenarioConfig& cfg);

double harvested_energy_comp(const AllocationCoMP& alloc, const Trajectory& traj, int k,
                             const ScenarioConfig& cfg);

/// log2(1 + (1/2) sum_m Q_k g_{k,m} / sigma^2): the per-unit-time ZF rate bound.
double comp_rate_upper_bound(double Q_k, std::array<Point2, 2> uavs, int k,
                             const ScenarioConfig& cfg);

std::array<double, 2> device_rates_comp(const AllocationCoMP& alloc, const Trajectory& traj,
                                        const ScenarioConfig& cfg);
double common_throughput_comp(const AllocationCoMP& alloc, const Trajectory& traj,
                              const ScenarioConfig& cfg);
double energy_neutrality_residual_comp(const AllocationCoMP& alloc, const Trajectory& traj, int k,
                                       const ScenarioConfig& cfg);

// ---- feasibility ------------------------------------------------------------

struct FeasibilityReport
{
  double endpoint_error = 0.0;     // m
  double speed_violation = 0.0;    // m beyond V*delta
  double separation_violation = 0.0;  // m below dmin
  double time_violation = 0.0;     // s, negative durations or slot overrun
  double power_violation = 0.0;    // W below zero
  std::array<double, 2> energy_residual{0.0, 0.0};  // J, harvested minus spent

  bool trajectory_ok() const;
  bool ok() const;
  /// Largest violation across all checks, energy expressed as -residual.
  double max_violation() const;
};

FeasibilityReport check_trajectory(const Trajectory& traj, const ScenarioConfig& cfg);
FeasibilityReport check_ic(const AllocationIC& alloc, const Trajectory& traj,
                           const ScenarioConfig& cfg);
FeasibilityReport check_comp(const AllocationCoMP& alloc, const Trajectory& traj,
                             const ScenarioConfig& cfg);

}  // namespace wpcn
