#pragma once

#include <array>

#include "wpcn/scenario.hpp"

// First-order surrogates used by the SCA engines, as plain evaluators. Each
// is exact at its expansion point and a global lower bound of the quantity
// it replaces. Rates are per unit uplink time (bps/Hz).
namespace wpcn::sca
{

/// Uplink rate of device k at UAV k with power-domain surrogate around the
/// interferer's power Q_other_l. `g_own` is device k's gain at UAV k,
/// `g_cross` the other device's gain at UAV k.
double rate_lower_bound_power(double Q_own, double Q_other, double Q_other_l, double g_own,
                              double g_cross, const ScenarioConfig& cfg);

/// Rate of device k at UAV k located at q, linearised around q_l in the
/// squared distances of the useful-plus-interference term. The interference
/// term is kept exact, as written in the trajectory subproblem.
double rate_lower_bound_traj(Point2 q, Point2 q_l, std::array<double, 2> Q, int k,
                             const ScenarioConfig& cfg);

/// Same bound with the interference term also bounded through the tangent
/// of |q - w_other|^2, which makes it concave in q. This is the form the
/// solver optimises.
double rate_lower_bound_traj_concave(Point2 q, Point2 q_l, std::array<double, 2> Q, int k,
                                     const ScenarioConfig& cfg);

/// Tangent lower bound of the channel gain beta0 / (|q - w|^2 + H^2) around q_l.
double gain_lower_bound(Point2 q, Point2 q_l, Point2 w, const ScenarioConfig& cfg);

/// Lower bound of the energy harvested by device k in one slot of charging
/// time delta_E, both UAVs contributing.
double energy_lower_bound_ic(std::array<Point2, 2> q, std::array<Point2, 2> q_l, double delta_E,
                             int k, const ScenarioConfig& cfg);

/// Tangent lower bound of |q1 - q2|^2 around (q1_l, q2_l).
double separation_lower_bound(Point2 q1, Point2 q2, Point2 q1_l, Point2 q2_l);

/// Tangent lower bound of (a1 + a2)^2 around (a1_l, a2_l).
double coherent_sum_lower_bound(double a1, double a2, double a1_l, double a2_l);

/// Tangent lower bound of 1 / b around b_l > 0.
double inverse_lower_bound(double b, double b_l);

}  // namespace wpcn::sca
