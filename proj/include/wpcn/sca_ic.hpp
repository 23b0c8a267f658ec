#pragma once

#include <optional>
#include <vector>

#include "wpcn/analytic_ic.hpp"
#include "wpcn/sca_common.hpp"
#include "wpcn/scenario.hpp"

namespace wpcn::sca
{

struct SolveReport
{
  Trajectory trajectory;
  AllocationIC allocation;
  double common_rate = 0.0;
  /// Rate after the first time allocation on the initial trajectory, then one
  /// entry per outer iteration.
  std::vector<double> trace;
  /// True objective after each accepted step of every power and trajectory pass.
  std::vector<std::vector<double>> inner_traces;
  FeasibilityReport feasibility;
  Initialization init = Initialization::SHF;
  int outer_iterations = 0;
  bool converged = false;
  double seconds = 0.0;
};

/// Hover-and-fly path: initial -> charging hover -> uplink hover -> final.
/// Dwell time is split in proportion tau_E : T - tau_E. Returns nullopt when
/// the mission is too short to visit the hover points.
std::optional<Trajectory> shf_trajectory_ic(const ScenarioConfig& cfg,
                                            const analytic::HoverSolutionIC& hover);

/// Device powers used to seed the first time allocation: the hover solution's
/// uplink power in every slot.
AllocationIC initial_allocation_ic(const ScenarioConfig& cfg,
                                   const analytic::HoverSolutionIC& hover);

/// Time-split LP with trajectory and powers fixed. Returns `alloc` unchanged
/// when the LP does not improve on it.
AllocationIC optimize_time_ic(const ScenarioConfig& cfg, const Trajectory& traj,
                              const AllocationIC& alloc, const ScaOptions& opts = {});

/// SCA on the device powers; `alloc` must satisfy energy neutrality.
AllocationIC optimize_power_ic(const ScenarioConfig& cfg, const Trajectory& traj,
                               const AllocationIC& alloc, const ScaOptions& opts = {},
                               std::vector<double>* trace = nullptr);

/// SCA on both trajectories; `traj` must be feasible together with `alloc`.
Trajectory optimize_traj_ic(const ScenarioConfig& cfg, const AllocationIC& alloc,
                            const Trajectory& traj, const ScaOptions& opts = {},
                            std::vector<double>* trace = nullptr);

/// Alternating optimisation from a given starting point.
SolveReport solve_ic_from(const ScenarioConfig& cfg, const Trajectory& traj,
                          const AllocationIC& alloc, Initialization init,
                          const ScaOptions& opts = {});

/// Full finite-horizon solve: SHF start (direct flight when the mission is
/// too short), then time, power and trajectory updates in turn.
SolveReport solve_ic(const ScenarioConfig& cfg, const ScaOptions& opts = {});

/// Benchmark: straight constant-speed flight, time and power optimised.
SolveReport benchmark_direct_ic(const ScenarioConfig& cfg, const ScaOptions& opts = {});

}  // namespace wpcn::sca
