#pragma once

#include <array>
#include <optional>
#include <vector>

#include "wpcn/analytic_comp.hpp"
#include "wpcn/sca_common.hpp"
#include "wpcn/scenario.hpp"

namespace wpcn::sca
{

/// Auxiliary variables of the CoMP trajectory subproblem, slot i at index i.
/// a[k][m][i]^2 <= beta0 / (|q_m - w_k|^2 + H^2) and
/// |q_m - w_k|^2 + H^2 <= 1 / b[k][m][i].
struct SlackState
{
  std::array<std::array<std::vector<double>, 2>, 2> a;
  std::array<std::array<std::vector<double>, 2>, 2> b;
};

/// Slacks at equality for a trajectory.
SlackState slacks_at(const Trajectory& traj, const ScenarioConfig& cfg);

struct SolveReportCoMP
{
  Trajectory trajectory;
  AllocationCoMP allocation;
  double common_rate = 0.0;
  std::vector<double> trace;
  std::vector<std::vector<double>> inner_traces;
  FeasibilityReport feasibility;
  Initialization init = Initialization::SHF;
  int outer_iterations = 0;
  bool converged = false;
  double seconds = 0.0;
};

/// Hover-and-fly path: initial -> charging pair for device 1 -> uplink hover
/// -> mirrored charging pair for device 2 -> final.
std::optional<Trajectory> shf_trajectory_comp(const ScenarioConfig& cfg,
                                              const analytic::HoverSolutionCoMP& hover);

/// The hover solution's uplink power in every slot for both devices.
AllocationCoMP initial_allocation_comp(const ScenarioConfig& cfg,
                                       const analytic::HoverSolutionCoMP& hover);

AllocationCoMP optimize_time_comp(const ScenarioConfig& cfg, const Trajectory& traj,
                                  const AllocationCoMP& alloc, const ScaOptions& opts = {});

/// Exact convex power update (no linearisation is needed for the bound rate).
AllocationCoMP optimize_power_comp(const ScenarioConfig& cfg, const Trajectory& traj,
                                   const AllocationCoMP& alloc, const ScaOptions& opts = {});

struct TrajectoryUpdateCoMP
{
  Trajectory trajectory;
  SlackState slacks;
};

TrajectoryUpdateCoMP optimize_traj_comp(const ScenarioConfig& cfg, const AllocationCoMP& alloc,
                                        const Trajectory& traj, const ScaOptions& opts = {},
                                        std::vector<double>* trace = nullptr);

SolveReportCoMP solve_comp_from(const ScenarioConfig& cfg, const Trajectory& traj,
                               const AllocationCoMP& alloc, Initialization init,
                               const ScaOptions& opts = {});

SolveReportCoMP solve_comp(const ScenarioConfig& cfg, const ScaOptions& opts = {});

SolveReportCoMP benchmark_direct_comp(const ScenarioConfig& cfg, const ScaOptions& opts = {});

}  // namespace wpcn::sca
