#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "wpcn/convex.hpp"
#include "wpcn/sca_common.hpp"
#include "wpcn/scenario.hpp"

namespace wpcn::sca::detail
{

using convex::ConcaveExpr;
using convex::LinearForm;
using convex::NegSquaredNorm;
using convex::Vec;

// Below this fraction of a slot an uplink sub-slot is treated as switched off
// when choosing which powers to optimise.
inline constexpr double kActiveSlotFraction = 1e-7;

/// Maps the free UAV positions q_m[n], n = 1..N-1, onto solver variables
/// starting at `first`. Endpoints stay at the reference trajectory.
class PositionVars
{
public:
  PositionVars(const Trajectory& ref, int first) : ref_(ref), N_(ref.num_slots()), first_(first) {}

  int count() const { return 4 * (N_ - 1); }
  int end() const { return first_ + count(); }
  bool is_free(int n) const { return n >= 1 && n < N_; }
  int var(int m, int n, int c) const { return first_ + ((n - 1) * 2 + m) * 2 + c; }

  /// Adds coef * (q_m[n])_c to the affine form (row, offset).
  void add_coord(LinearForm& row, double& offset, int m, int n, int c, double coef) const
  {
    if (is_free(n))
      row.push_back({var(m, n, c), coef});
    else
      offset += coef * (c == 0 ? ref_.q[m][n].x : ref_.q[m][n].y);
  }

  /// -weight * |q_m[n] - p|^2.
  NegSquaredNorm neg_sq_dist(int m, int n, Point2 p, double weight) const
  {
    NegSquaredNorm t;
    t.weight = weight;
    for (int c = 0; c < 2; ++c)
    {
      LinearForm row;
      double off = -(c == 0 ? p.x : p.y);
      add_coord(row, off, m, n, c, 1.0);
      t.rows.push_back(std::move(row));
      t.offsets.push_back(off);
    }
    return t;
  }

  /// -weight * |q_m[n] - q_m'[n'] - p|^2 (used for speed limits).
  NegSquaredNorm neg_sq_diff(int m, int n, int m2, int n2, double weight) const
  {
    NegSquaredNorm t;
    t.weight = weight;
    for (int c = 0; c < 2; ++c)
    {
      LinearForm row;
      double off = 0.0;
      add_coord(row, off, m, n, c, 1.0);
      add_coord(row, off, m2, n2, c, -1.0);
      t.rows.push_back(std::move(row));
      t.offsets.push_back(off);
    }
    return t;
  }

  /// Adds coef * v . q_m[n] to an expression.
  void add_dot(ConcaveExpr& e, int m, int n, Point2 v, double coef) const
  {
    double off = 0.0;
    add_coord(e.linear, off, m, n, 0, coef * v.x);
    add_coord(e.linear, off, m, n, 1, coef * v.y);
    e.constant += off;
  }

  void fill(Vec& x, const Trajectory& t) const
  {
    for (int n = 1; n < N_; ++n)
      for (int m = 0; m < 2; ++m)
      {
        x[var(m, n, 0)] = t.q[m][n].x;
        x[var(m, n, 1)] = t.q[m][n].y;
      }
  }

  Trajectory extract(const Vec& x) const
  {
    Trajectory t = ref_;
    for (int n = 1; n < N_; ++n)
      for (int m = 0; m < 2; ++m)
        t.q[m][n] = {x[var(m, n, 0)], x[var(m, n, 1)]};
    return t;
  }

private:
  const Trajectory& ref_;
  int N_;
  int first_;
};

/// Constraints shared by both trajectory subproblems: per-slot speed limits,
/// the tangent separation bound and an optional trust region around `ref`.
inline void add_trajectory_constraints(convex::SmoothConcaveProgramSpec& spec,
                                       const PositionVars& pv, const Trajectory& ref,
                                       const ScenarioConfig& cfg, double trust_radius)
{
  const int N = ref.num_slots();
  const double vmax2 = cfg.max_step() * cfg.max_step();
  for (int m = 0; m < 2; ++m)
    for (int n = 1; n <= N; ++n)
    {
      if (!pv.is_free(n) && !pv.is_free(n - 1))
        continue;
      ConcaveExpr c;
      c.constant = 1.0;
      c.add(pv.neg_sq_diff(m, n, m, n - 1, 1.0 / vmax2));
      spec.constraints.push_back(std::move(c));
    }
  const double dmin2 = cfg.min_separation * cfg.min_separation;
  for (int n = 1; n < N; ++n)
  {
    // -|d_l|^2 + 2 d_l . (q1 - q2) >= dmin^2, scaled by 1/dmin^2
    const Point2 d_l = ref.q[0][n] - ref.q[1][n];
    ConcaveExpr c;
    c.constant = -squared_norm(d_l) / dmin2 - 1.0;
    pv.add_dot(c, 0, n, d_l, 2.0 / dmin2);
    pv.add_dot(c, 1, n, d_l, -2.0 / dmin2);
    spec.constraints.push_back(std::move(c));
  }
  if (std::isfinite(trust_radius))
  {
    const double r2 = trust_radius * trust_radius;
    for (int n = 1; n < N; ++n)
      for (int m = 0; m < 2; ++m)
      {
        ConcaveExpr c;
        c.constant = 1.0;
        c.add(pv.neg_sq_dist(m, n, ref.q[m][n], 1.0 / r2));
        spec.constraints.push_back(std::move(c));
      }
  }
}

/// Generic SCA pass. `solve(incumbent, radius)` returns the surrogate
/// optimum (or nullopt on solver failure); `evaluate` returns the true
/// objective or nullopt when a candidate breaks a true constraint. The pass
/// only ever moves to candidates that do not lower the true objective.
template <class State, class Solve, class Evaluate>
State sca_pass(State incumbent, double objective, Solve&& solve, Evaluate&& evaluate,
               const ScaOptions& opts, double initial_radius, std::vector<double>* trace)
{
  if (trace)
    trace->push_back(objective);
  const double inf = std::numeric_limits<double>::infinity();
  for (int it = 0; it < opts.max_inner; ++it)
  {
    const double floor_tol = opts.inner_tol * std::max(std::abs(objective), 1e-12);
    std::optional<State> accepted;
    double accepted_obj = objective;
    bool stalled = false;
    double radius = inf;
    for (int attempt = 0; attempt <= opts.max_trust_halvings; ++attempt)
    {
      std::optional<State> cand = solve(incumbent, radius);
      if (cand)
      {
        const std::optional<double> val = evaluate(*cand);
        if (val && *val >= objective)
        {
          accepted = std::move(cand);
          accepted_obj = *val;
          break;
        }
        if (val && *val >= objective - floor_tol)
        {
          // the surrogate optimum sits at the incumbent up to solver accuracy
          stalled = true;
          break;
        }
      }
      if (!std::isfinite(initial_radius))
        break;
      radius = std::isfinite(radius) ? radius / 2.0 : initial_radius;
    }
    if (!accepted || stalled)
      break;
    const double gain = accepted_obj - objective;
    incumbent = std::move(*accepted);
    objective = accepted_obj;
    if (trace)
      trace->push_back(objective);
    if (gain <= floor_tol)
      break;
  }
  return incumbent;
}

}  // namespace wpcn::sca::detail
