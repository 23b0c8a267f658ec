#include "wpcn/sca_ic.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>

#include "sca_detail.hpp"

namespace wpcn::sca
{

using convex::ConcaveExpr;
using convex::ConcaveOfAffine;
using convex::CurvePoint;
using convex::LogAffine;
using convex::SmoothConcaveProgramSpec;
using convex::Vec;
using detail::PositionVars;

namespace
{

constexpr double kLog2e = std::numbers::log2e;
constexpr double kLn2 = std::numbers::ln2;

bool usable(const convex::SolveOutcome& out)
{
  return (out.status == convex::SolveStatus::Optimal ||
          out.status == convex::SolveStatus::MaxIter) &&
         out.x.allFinite();
}

std::optional<double> checked_rate(const AllocationIC& alloc, const Trajectory& traj,
                                   const ScenarioConfig& cfg)
{
  if (!check_ic(alloc, traj, cfg).ok())
    return std::nullopt;
  return common_throughput_ic(alloc, traj, cfg);
}

// Smallest surrogate rate at x with the epigraph variable at zero, minus a
// margin so that the start is strictly inside the epigraph.
double epigraph_start(const SmoothConcaveProgramSpec& spec, const std::vector<int>& rate_rows,
                      Vec& x, int r_var)
{
  x[r_var] = 0.0;
  double lo = std::numeric_limits<double>::infinity();
  for (int i : rate_rows)
    lo = std::min(lo, convex::evaluate(spec.constraints[i], x));
  return lo - std::max(1e-6, 1e-3 * std::abs(lo));
}

}  // namespace

std::optional<Trajectory> shf_trajectory_ic(const ScenarioConfig& cfg,
                                            const analytic::HoverSolutionIC& hover)
{
  const double xe = hover.wpt_hover_x;
  const double xi = hover.wit_hover_x;
  const double T = cfg.mission_T;
  const std::vector<HoverStop> stops{
      {{Point2{-xe, 0.0}, Point2{xe, 0.0}}, hover.tau_E},
      {{Point2{-xi, 0.0}, Point2{xi, 0.0}}, std::max(T - hover.tau_E, 0.0)}};
  return hover_and_fly(cfg, stops);
}

AllocationIC initial_allocation_ic(const ScenarioConfig& cfg,
                                   const analytic::HoverSolutionIC& hover)
{
  AllocationIC a = AllocationIC::zeros(cfg.num_slots_N);
  const double uplink = cfg.mission_T - hover.tau_E;
  const double Q = uplink > 0 ? hover.harvested_energy_per_device / uplink : 0.0;
  if (hover.wit_mode == analytic::WitMode::TDMA)
  {
    // devices take turns slot by slot at twice the power
    for (int i = 0; i < cfg.num_slots_N; ++i)
      a.Q[i % 2][i] = 2.0 * Q;
    return a;
  }
  for (int k = 0; k < 2; ++k)
    std::fill(a.Q[k].begin(), a.Q[k].end(), Q);
  return a;
}

AllocationIC optimize_time_ic(const ScenarioConfig& cfg, const Trajectory& traj,
                              const AllocationIC& alloc, const ScaOptions& opts)
{
  const int N = cfg.num_slots_N;
  const double slot = cfg.slot();
  const double T = cfg.mission_T;
  const double charge = cfg.eh_efficiency_eta * cfg.uav_tx_power_P;

  convex::LinearProgramSpec lp;
  lp.num_vars = 2 * N + 1;
  const int R = 2 * N;
  lp.objective.assign(lp.num_vars, 0.0);
  lp.objective[R] = 1.0;
  lp.var_lower.assign(lp.num_vars, 0.0);
  lp.var_upper.assign(lp.num_vars, slot);
  lp.var_lower[R] = -std::numeric_limits<double>::infinity();
  lp.var_upper[R] = std::numeric_limits<double>::infinity();

  for (int k = 0; k < 2; ++k)
  {
    convex::LinearProgramSpec::Row rate;
    convex::LinearProgramSpec::Row energy;
    double scale = 0.0;
    for (int i = 0; i < N; ++i)
    {
      const auto uavs = traj.at(i + 1);
      const double r = std::log2(1.0 + sinr_ic({alloc.Q[0][i], alloc.Q[1][i]}, uavs, k, cfg));
      if (r > 0.0)
        rate.coeffs.push_back({N + i, r / T});
      const double g = charge * (channel_gain(uavs[0], cfg.devices[k], cfg) +
                                 channel_gain(uavs[1], cfg.devices[k], cfg));
      energy.coeffs.push_back({i, g});
      if (alloc.Q[k][i] > 0.0)
        energy.coeffs.push_back({N + i, -alloc.Q[k][i]});
      scale = std::max({scale, g, alloc.Q[k][i]});
    }
    for (auto& t : energy.coeffs)
      t.coef /= scale;
    rate.coeffs.push_back({R, -1.0});
    rate.lower = 0.0;
    energy.lower = 0.0;
    lp.rows.push_back(std::move(rate));
    lp.rows.push_back(std::move(energy));
  }
  for (int i = 0; i < N; ++i)
  {
    convex::LinearProgramSpec::Row row;
    row.coeffs = {{i, 1.0 / slot}, {N + i, 1.0 / slot}};
    row.upper = 1.0;
    lp.rows.push_back(std::move(row));
  }

  const convex::SolveOutcome out = convex::solve_lp(lp, opts.barrier);
  if (!usable(out))
    return alloc;
  AllocationIC cand = alloc;
  for (int i = 0; i < N; ++i)
  {
    cand.delta_E[i] = std::max(0.0, out.x[i]);
    cand.delta_I[i] = std::max(0.0, out.x[N + i]);
  }
  const std::optional<double> now = checked_rate(alloc, traj, cfg);
  const std::optional<double> next = checked_rate(cand, traj, cfg);
  if (next && (!now || *next >= *now))
    return cand;
  return alloc;
}

AllocationIC optimize_power_ic(const ScenarioConfig& cfg, const Trajectory& traj,
                               const AllocationIC& alloc, const ScaOptions& opts,
                               std::vector<double>* trace)
{
  const int N = cfg.num_slots_N;
  const double T = cfg.mission_T;
  const double s2 = cfg.noise_sigma2;

  std::vector<int> active;
  double active_time = 0.0;
  for (int i = 0; i < N; ++i)
    if (alloc.delta_I[i] > detail::kActiveSlotFraction * cfg.slot())
    {
      active.push_back(i);
      active_time += alloc.delta_I[i];
    }
  const std::optional<double> start_rate = checked_rate(alloc, traj, cfg);
  if (active.empty() || !start_rate)
    return alloc;

  std::array<double, 2> harvested{};
  for (int k = 0; k < 2; ++k)
    harvested[k] = harvested_energy_ic(alloc, traj, k, cfg);
  const double Qs = std::max(harvested[0], harvested[1]) / active_time;
  if (!(Qs > 0.0))
    return alloc;

  const int J = static_cast<int>(active.size());
  const int R = 2 * J;
  const auto var = [](int j, int k) { return 2 * j + k; };
  std::vector<int> slot_index(N, -1);
  for (int j = 0; j < J; ++j)
    slot_index[active[j]] = j;

  const auto solve = [&](const AllocationIC& inc, double) -> std::optional<AllocationIC> {
    SmoothConcaveProgramSpec spec;
    spec.num_vars = 2 * J + 1;
    spec.objective.add(R, 1.0);
    std::vector<int> rate_rows;
    for (int k = 0; k < 2; ++k)
    {
      const int o = 1 - k;
      ConcaveExpr rate;
      ConcaveExpr energy;
      energy.constant = 1.0;
      for (int i = 0; i < N; ++i)
      {
        const auto uavs = traj.at(i + 1);
        const double w = inc.delta_I[i] / T;
        const int j = slot_index[i];
        if (j < 0)
        {
          rate.constant +=
              w * std::log2(1.0 + sinr_ic({inc.Q[0][i], inc.Q[1][i]}, uavs, k, cfg));
          energy.constant -= inc.Q[k][i] * inc.delta_I[i] / harvested[k];
          continue;
        }
        const double g_own = channel_gain(uavs[k], cfg.devices[k], cfg) / s2;
        const double g_cross = channel_gain(uavs[k], cfg.devices[o], cfg) / s2;
        rate.add(LogAffine{w / kLn2, 1.0, {{var(j, k), Qs * g_own}, {var(j, o), Qs * g_cross}}});
        const double denom_l = 1.0 + inc.Q[o][i] * g_cross;
        const double slope = g_cross * kLog2e / denom_l;
        rate.constant -= w * (std::log2(denom_l) - slope * inc.Q[o][i]);
        rate.add(var(j, o), -w * slope * Qs);
        energy.add(var(j, k), -Qs * inc.delta_I[i] / harvested[k]);
      }
      rate.add(R, -1.0);
      rate_rows.push_back(static_cast<int>(spec.constraints.size()));
      spec.constraints.push_back(std::move(rate));
      spec.constraints.push_back(std::move(energy));
      for (int j = 0; j < J; ++j)
      {
        ConcaveExpr nonneg;
        nonneg.add(var(j, k), 1.0);
        spec.constraints.push_back(std::move(nonneg));
      }
    }
    Vec x(spec.num_vars);
    for (int j = 0; j < J; ++j)
      for (int k = 0; k < 2; ++k)
        x[var(j, k)] = inc.Q[k][active[j]] / Qs;
    x[R] = epigraph_start(spec, rate_rows, x, R);
    const convex::SolveOutcome out = convex::solve_concave_from(spec, x, opts.barrier);
    if (!usable(out))
      return std::nullopt;
    AllocationIC cand = inc;
    for (int j = 0; j < J; ++j)
      for (int k = 0; k < 2; ++k)
        cand.Q[k][active[j]] = std::max(0.0, out.x[var(j, k)] * Qs);
    return cand;
  };
  const auto evaluate = [&](const AllocationIC& a) { return checked_rate(a, traj, cfg); };
  const double inf = std::numeric_limits<double>::infinity();
  AllocationIC best = detail::sca_pass(alloc, *start_rate, solve, evaluate, opts, inf, trace);
  double best_rate = evaluate(best).value_or(*start_rate);

  // The power problem is not concave, and a start where both devices share
  // every slot tends to stay there. Restart from the two alternating
  // one-device-per-slot patterns and keep whichever ends highest.
  std::array<double, 2> budget = harvested;
  for (int k = 0; k < 2; ++k)
    for (int i = 0; i < N; ++i)
      if (slot_index[i] < 0)
        budget[k] -= alloc.Q[k][i] * alloc.delta_I[i];
  for (int parity = 0; parity < 2 && J >= 2; ++parity)
  {
    AllocationIC seed = alloc;
    std::array<double, 2> assigned{};
    for (int j = 0; j < J; ++j)
      assigned[(j + parity) % 2] += alloc.delta_I[active[j]];
    for (int j = 0; j < J; ++j)
    {
      const int k = (j + parity) % 2;
      seed.Q[k][active[j]] = std::max(0.0, budget[k]) / assigned[k];
      seed.Q[1 - k][active[j]] = 0.0;
    }
    const std::optional<double> seed_rate = evaluate(seed);
    if (!seed_rate)
      continue;
    AllocationIC cand = detail::sca_pass(seed, *seed_rate, solve, evaluate, opts, inf, nullptr);
    const std::optional<double> r = evaluate(cand);
    if (r && *r > best_rate)
    {
      best = std::move(cand);
      best_rate = *r;
      if (trace)
        trace->push_back(best_rate);
    }
  }
  return best;
}

Trajectory optimize_traj_ic(const ScenarioConfig& cfg, const AllocationIC& alloc,
                            const Trajectory& traj, const ScaOptions& opts,
                            std::vector<double>* trace)
{
  const int N = cfg.num_slots_N;
  const double T = cfg.mission_T;
  const double H2 = cfg.altitude_H * cfg.altitude_H;
  const double s2 = cfg.noise_sigma2;
  const double b0 = cfg.ref_gain_beta0;
  const double charge = cfg.eh_efficiency_eta * cfg.uav_tx_power_P * b0;

  const std::optional<double> start_rate = checked_rate(alloc, traj, cfg);
  if (!start_rate || N < 2)
    return traj;

  std::array<double, 2> spent{};
  for (int k = 0; k < 2; ++k)
    for (int i = 0; i < N; ++i)
      spent[k] += alloc.Q[k][i] * alloc.delta_I[i];

  const auto solve = [&](const Trajectory& inc, double radius) -> std::optional<Trajectory> {
    const PositionVars pv(inc, 0);
    const int R = pv.end();
    SmoothConcaveProgramSpec spec;
    spec.num_vars = R + 1;
    spec.objective.add(R, 1.0);
    std::vector<int> rate_rows;

    for (int k = 0; k < 2; ++k)
    {
      const int o = 1 - k;
      ConcaveExpr rate;
      for (int n = 1; n <= N; ++n)
      {
        const int i = n - 1;
        const double w = alloc.delta_I[i] / T;
        if (w <= 0.0)
          continue;
        const Point2 q_l = inc.q[k][n];
        const std::array<double, 2> snr{alloc.Q[0][i] * b0 / s2, alloc.Q[1][i] * b0 / s2};
        std::array<double, 2> u_l{};
        double total_l = 1.0;
        for (int d = 0; d < 2; ++d)
        {
          u_l[d] = squared_norm(q_l - cfg.devices[d]) + H2;
          total_l += snr[d] / u_l[d];
        }
        rate.constant += w * std::log2(total_l);
        for (int d = 0; d < 2; ++d)
        {
          if (snr[d] <= 0.0)
            continue;
          const double c = w * snr[d] / (u_l[d] * u_l[d]) * kLog2e / total_l;
          rate.constant += c * (u_l[d] - H2);
          rate.add(pv.neg_sq_dist(k, n, cfg.devices[d], c));
        }
        if (snr[o] > 0.0)
        {
          // -log2(1 + snr_o / u) with u the tangent of |q - w_o|^2 plus H^2
          const Point2 e_l = q_l - cfg.devices[o];
          ConcaveOfAffine term;
          term.constant = H2 + squared_norm(e_l) - 2.0 * dot(e_l, q_l);
          for (int c = 0; c < 2; ++c)
            pv.add_coord(term.affine, term.constant, k, n, c, 2.0 * (c == 0 ? e_l.x : e_l.y));
          const double a = snr[o];
          term.curve = [w, a](double u) -> CurvePoint {
            if (!(u > 0.0))
              return {-std::numeric_limits<double>::infinity(), 0.0, 0.0};
            const double v = u + a;
            return {w * (std::log2(u) - std::log2(v)), w * (1.0 / u - 1.0 / v) / kLn2,
                    w * (1.0 / (v * v) - 1.0 / (u * u)) / kLn2};
          };
          rate.add(std::move(term));
        }
      }
      rate.add(R, -1.0);
      rate_rows.push_back(static_cast<int>(spec.constraints.size()));
      spec.constraints.push_back(std::move(rate));

      if (spent[k] > 0.0)
      {
        ConcaveExpr energy;
        energy.constant = -1.0;
        for (int n = 1; n <= N; ++n)
        {
          const double dE = alloc.delta_E[n - 1];
          if (dE <= 0.0)
            continue;
          for (int m = 0; m < 2; ++m)
          {
            const double u_l = H2 + squared_norm(inc.q[m][n] - cfg.devices[k]);
            const double kappa = charge * dE / spent[k];
            energy.constant += kappa * (2.0 / u_l - H2 / (u_l * u_l));
            energy.add(pv.neg_sq_dist(m, n, cfg.devices[k], kappa / (u_l * u_l)));
          }
        }
        spec.constraints.push_back(std::move(energy));
      }
    }
    detail::add_trajectory_constraints(spec, pv, inc, cfg, radius);

    Vec x(spec.num_vars);
    pv.fill(x, inc);
    x[R] = epigraph_start(spec, rate_rows, x, R);
    const convex::SolveOutcome out = convex::solve_concave_from(spec, x, opts.barrier);
    if (!usable(out))
      return std::nullopt;
    return pv.extract(out.x);
  };
  const auto evaluate = [&](const Trajectory& t) { return checked_rate(alloc, t, cfg); };
  const double radius = std::max(cfg.max_step() * N / 8.0, cfg.min_separation);
  return detail::sca_pass(traj, *start_rate, solve, evaluate, opts, radius, trace);
}

SolveReport solve_ic_from(const ScenarioConfig& cfg, const Trajectory& traj,
                          const AllocationIC& alloc, Initialization init, const ScaOptions& opts)
{
  const auto t0 = std::chrono::steady_clock::now();
  SolveReport rep;
  rep.init = init;
  rep.trajectory = traj;
  rep.allocation = optimize_time_ic(cfg, traj, alloc, opts);
  double rate = common_throughput_ic(rep.allocation, rep.trajectory, cfg);
  rep.trace.push_back(rate);

  for (int it = 0; it < opts.max_outer; ++it)
  {
    rep.allocation = optimize_time_ic(cfg, rep.trajectory, rep.allocation, opts);
    rep.inner_traces.emplace_back();
    rep.allocation =
        optimize_power_ic(cfg, rep.trajectory, rep.allocation, opts, &rep.inner_traces.back());
    if (opts.optimize_trajectory)
    {
      rep.inner_traces.emplace_back();
      rep.trajectory = optimize_traj_ic(cfg, rep.allocation, rep.trajectory, opts,
                                        &rep.inner_traces.back());
    }
    const double next = common_throughput_ic(rep.allocation, rep.trajectory, cfg);
    rep.trace.push_back(next);
    rep.outer_iterations = it + 1;
    const double gain = next - rate;
    rate = next;
    if (gain <= opts.outer_tol * std::max(std::abs(rate), 1e-12))
    {
      rep.converged = true;
      break;
    }
  }
  rep.common_rate = rate;
  rep.feasibility = check_ic(rep.allocation, rep.trajectory, cfg);
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

SolveReport solve_ic(const ScenarioConfig& cfg, const ScaOptions& opts)
{
  cfg.validate();
  const analytic::HoverSolutionIC hover = analytic::solve_infinite_ic(cfg);
  const AllocationIC alloc = initial_allocation_ic(cfg, hover);
  if (opts.force_init != Initialization::DirectFlight)
    if (auto shf = shf_trajectory_ic(cfg, hover))
      return solve_ic_from(cfg, *shf, alloc, Initialization::SHF, opts);
  return solve_ic_from(cfg, direct_flight(cfg), alloc, Initialization::DirectFlight, opts);
}

SolveReport benchmark_direct_ic(const ScenarioConfig& cfg, const ScaOptions& opts)
{
  ScaOptions o = opts;
  o.force_init = Initialization::DirectFlight;
  o.optimize_trajectory = false;
  return solve_ic(cfg, o);
}

}  // namespace wpcn::sca
