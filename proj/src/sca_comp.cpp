#include "wpcn/sca_comp.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>

#include "sca_detail.hpp"

namespace wpcn::sca
{

using convex::ConcaveExpr;
using convex::LogAffine;
using convex::NegSquaredNorm;
using convex::SmoothConcaveProgramSpec;
using convex::Vec;
using detail::PositionVars;

namespace
{

constexpr double kLn2 = std::numbers::ln2;

bool usable(const convex::SolveOutcome& out)
{
  return (out.status == convex::SolveStatus::Optimal ||
          out.status == convex::SolveStatus::MaxIter) &&
         out.x.allFinite();
}

std::optional<double> checked_rate(const AllocationCoMP& alloc, const Trajectory& traj,
                                   const ScenarioConfig& cfg)
{
  if (!check_comp(alloc, traj, cfg).ok())
    return std::nullopt;
  return common_throughput_comp(alloc, traj, cfg);
}

double epigraph_start(const SmoothConcaveProgramSpec& spec, const std::vector<int>& rate_rows,
                      Vec& x, int r_var)
{
  x[r_var] = 0.0;
  double lo = std::numeric_limits<double>::infinity();
  for (int i : rate_rows)
    lo = std::min(lo, convex::evaluate(spec.constraints[i], x));
  return lo - std::max(1e-6, 1e-3 * std::abs(lo));
}

// Bound-rate gain of device k in a slot: log2(1 + Q * gain).
double bound_gain(const std::array<Point2, 2>& uavs, int k, const ScenarioConfig& cfg)
{
  return 0.5 *
         (channel_gain(uavs[0], cfg.devices[k], cfg) + channel_gain(uavs[1], cfg.devices[k], cfg)) /
         cfg.noise_sigma2;
}

}  // namespace

SlackState slacks_at(const Trajectory& traj, const ScenarioConfig& cfg)
{
  const int N = traj.num_slots();
  SlackState s;
  for (int k = 0; k < 2; ++k)
    for (int m = 0; m < 2; ++m)
    {
      s.a[k][m].resize(N);
      s.b[k][m].resize(N);
      for (int i = 0; i < N; ++i)
      {
        const double g = channel_gain(traj.q[m][i + 1], cfg.devices[k], cfg);
        s.a[k][m][i] = std::sqrt(g);
        s.b[k][m][i] = g / cfg.ref_gain_beta0;
      }
    }
  return s;
}

std::optional<Trajectory> shf_trajectory_comp(const ScenarioConfig& cfg,
                                              const analytic::HoverSolutionCoMP& hover)
{
  const double x1 = hover.wpt_pair[0];
  const double x2 = hover.wpt_pair[1];
  const double xi = hover.wit_hover_x;
  const double T = cfg.mission_T;
  const double half = hover.tau_E_total / 2.0;
  const std::vector<HoverStop> stops{
      {{Point2{x1, 0.0}, Point2{x2, 0.0}}, half},
      {{Point2{-xi, 0.0}, Point2{xi, 0.0}}, std::max(T - hover.tau_E_total, 0.0)},
      {{Point2{-x2, 0.0}, Point2{-x1, 0.0}}, half}};
  return hover_and_fly(cfg, stops);
}

AllocationCoMP initial_allocation_comp(const ScenarioConfig& cfg,
                                       const analytic::HoverSolutionCoMP& hover)
{
  AllocationCoMP a = AllocationCoMP::zeros(cfg.num_slots_N);
  for (int k = 0; k < 2; ++k)
    std::fill(a.Q[k].begin(), a.Q[k].end(), hover.Q_comp);
  return a;
}

AllocationCoMP optimize_time_comp(const ScenarioConfig& cfg, const Trajectory& traj,
                                  const AllocationCoMP& alloc, const ScaOptions& opts)
{
  const int N = cfg.num_slots_N;
  const double slot = cfg.slot();
  const double T = cfg.mission_T;

  convex::LinearProgramSpec lp;
  lp.num_vars = 3 * N + 1;
  const int R = 3 * N;
  const auto rho_E = [N](int k, int i) { return k * N + i; };
  const auto rho_I = [N](int i) { return 2 * N + i; };
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
      const double r = comp_rate_upper_bound(alloc.Q[k][i], uavs, k, cfg);
      if (r > 0.0)
        rate.coeffs.push_back({rho_I(i), r / T});
      const double coh = comp_coherent_power(uavs, k, cfg);
      const double leak = comp_noncoherent_power(uavs, k, cfg);
      energy.coeffs.push_back({rho_E(k, i), coh});
      energy.coeffs.push_back({rho_E(1 - k, i), leak});
      if (alloc.Q[k][i] > 0.0)
        energy.coeffs.push_back({rho_I(i), -alloc.Q[k][i]});
      scale = std::max({scale, coh, alloc.Q[k][i]});
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
    row.coeffs = {{rho_E(0, i), 1.0 / slot}, {rho_E(1, i), 1.0 / slot}, {rho_I(i), 1.0 / slot}};
    row.upper = 1.0;
    lp.rows.push_back(std::move(row));
  }

  const convex::SolveOutcome out = convex::solve_lp(lp, opts.barrier);
  if (!usable(out))
    return alloc;
  AllocationCoMP cand = alloc;
  for (int i = 0; i < N; ++i)
  {
    for (int k = 0; k < 2; ++k)
      cand.rho_E[k][i] = std::max(0.0, out.x[rho_E(k, i)]);
    cand.rho_I[i] = std::max(0.0, out.x[rho_I(i)]);
  }
  const std::optional<double> now = checked_rate(alloc, traj, cfg);
  const std::optional<double> next = checked_rate(cand, traj, cfg);
  if (next && (!now || *next >= *now))
    return cand;
  return alloc;
}

AllocationCoMP optimize_power_comp(const ScenarioConfig& cfg, const Trajectory& traj,
                                   const AllocationCoMP& alloc, const ScaOptions& opts)
{
  const int N = cfg.num_slots_N;
  const double T = cfg.mission_T;

  std::vector<int> active;
  double active_time = 0.0;
  for (int i = 0; i < N; ++i)
    if (alloc.rho_I[i] > detail::kActiveSlotFraction * cfg.slot())
    {
      active.push_back(i);
      active_time += alloc.rho_I[i];
    }
  const std::optional<double> start_rate = checked_rate(alloc, traj, cfg);
  if (active.empty() || !start_rate)
    return alloc;

  std::array<double, 2> harvested{};
  for (int k = 0; k < 2; ++k)
    harvested[k] = harvested_energy_comp(alloc, traj, k, cfg);
  const double Qs = std::max(harvested[0], harvested[1]) / active_time;
  if (!(Qs > 0.0))
    return alloc;

  const int J = static_cast<int>(active.size());
  const int R = 2 * J;
  const auto var = [](int j, int k) { return 2 * j + k; };
  std::vector<char> is_active(N, 0);
  for (int i : active)
    is_active[i] = 1;

  SmoothConcaveProgramSpec spec;
  spec.num_vars = 2 * J + 1;
  spec.objective.add(R, 1.0);
  std::vector<int> rate_rows;
  for (int k = 0; k < 2; ++k)
  {
    ConcaveExpr rate;
    ConcaveExpr energy;
    energy.constant = 1.0;
    int j = 0;
    for (int i = 0; i < N; ++i)
    {
      const auto uavs = traj.at(i + 1);
      const double w = alloc.rho_I[i] / T;
      if (!is_active[i])
      {
        rate.constant += w * comp_rate_upper_bound(alloc.Q[k][i], uavs, k, cfg);
        energy.constant -= alloc.Q[k][i] * alloc.rho_I[i] / harvested[k];
        continue;
      }
      rate.add(LogAffine{w / kLn2, 1.0, {{var(j, k), Qs * bound_gain(uavs, k, cfg)}}});
      energy.add(var(j, k), -Qs * alloc.rho_I[i] / harvested[k]);
      ++j;
    }
    rate.add(R, -1.0);
    rate_rows.push_back(static_cast<int>(spec.constraints.size()));
    spec.constraints.push_back(std::move(rate));
    spec.constraints.push_back(std::move(energy));
    for (int jj = 0; jj < J; ++jj)
    {
      ConcaveExpr nonneg;
      nonneg.add(var(jj, k), 1.0);
      spec.constraints.push_back(std::move(nonneg));
    }
  }
  Vec x(spec.num_vars);
  for (int j = 0; j < J; ++j)
    for (int k = 0; k < 2; ++k)
      x[var(j, k)] = alloc.Q[k][active[j]] / Qs;
  x[R] = epigraph_start(spec, rate_rows, x, R);
  const convex::SolveOutcome out = convex::solve_concave_from(spec, x, opts.barrier);
  if (!usable(out))
    return alloc;
  AllocationCoMP cand = alloc;
  for (int j = 0; j < J; ++j)
    for (int k = 0; k < 2; ++k)
      cand.Q[k][active[j]] = std::max(0.0, out.x[var(j, k)] * Qs);
  const std::optional<double> next = checked_rate(cand, traj, cfg);
  if (next && *next >= *start_rate)
    return cand;
  return alloc;
}

TrajectoryUpdateCoMP optimize_traj_comp(const ScenarioConfig& cfg, const AllocationCoMP& alloc,
                                        const Trajectory& traj, const ScaOptions& opts,
                                        std::vector<double>* trace)
{
  const int N = cfg.num_slots_N;
  const double T = cfg.mission_T;
  const double H2 = cfg.altitude_H * cfg.altitude_H;
  const double b0 = cfg.ref_gain_beta0;
  const double s2 = cfg.noise_sigma2;
  const double etaP = cfg.eh_efficiency_eta * cfg.uav_tx_power_P;

  const std::optional<double> start_rate = checked_rate(alloc, traj, cfg);
  if (!start_rate || N < 2)
    return {traj, slacks_at(traj, cfg)};

  std::array<double, 2> spent{};
  for (int k = 0; k < 2; ++k)
    for (int i = 0; i < N; ++i)
      spent[k] += alloc.Q[k][i] * alloc.rho_I[i];

  // Normalised slacks: a_hat = a H / sqrt(beta0) and b_hat = b H^2, both
  // equal to H^2 / (|q - w|^2 + H^2) (a_hat squared) at equality.
  const auto solve = [&](const Trajectory& inc, double radius) -> std::optional<Trajectory> {
    const PositionVars pv(inc, 0);
    int next_var = pv.end();
    std::array<std::array<std::vector<int>, 2>, 2> a_var;
    std::array<std::array<std::vector<int>, 2>, 2> b_var;
    for (int k = 0; k < 2; ++k)
      for (int m = 0; m < 2; ++m)
      {
        a_var[k][m].assign(N, -1);
        b_var[k][m].assign(N, -1);
        for (int i = 0; i < N; ++i)
        {
          if (alloc.rho_E[k][i] > 0.0)
            a_var[k][m][i] = next_var++;
          if (alloc.rho_I[i] * alloc.Q[k][i] > 0.0)
            b_var[k][m][i] = next_var++;
        }
      }
    const int R = next_var;
    SmoothConcaveProgramSpec spec;
    spec.num_vars = R + 1;
    spec.objective.add(R, 1.0);
    Vec x(spec.num_vars);
    pv.fill(x, inc);

    for (int k = 0; k < 2; ++k)
      for (int m = 0; m < 2; ++m)
        for (int i = 0; i < N; ++i)
        {
          const int n = i + 1;
          const double u_l = H2 + squared_norm(inc.q[m][n] - cfg.devices[k]);
          const double gamma_l = H2 / u_l;
          if (const int a = a_var[k][m][i]; a >= 0)
          {
            // a_hat^2 <= H^2 (2 / u_l - u / u_l^2)
            ConcaveExpr c;
            c.constant = H2 * (2.0 / u_l - H2 / (u_l * u_l));
            c.add(pv.neg_sq_dist(m, n, cfg.devices[k], H2 / (u_l * u_l)));
            c.add(NegSquaredNorm{1.0, {{{a, 1.0}}}, {0.0}});
            spec.constraints.push_back(std::move(c));
            x[a] = std::sqrt(gamma_l);
          }
          if (const int b = b_var[k][m][i]; b >= 0)
          {
            // u / H^2 <= 2 / b_l - b / b_l^2, and b >= 0
            ConcaveExpr c;
            c.constant = 2.0 / gamma_l - 1.0;
            c.add(b, -1.0 / (gamma_l * gamma_l));
            c.add(pv.neg_sq_dist(m, n, cfg.devices[k], 1.0 / H2));
            spec.constraints.push_back(std::move(c));
            ConcaveExpr nonneg;
            nonneg.add(b, 1.0);
            spec.constraints.push_back(std::move(nonneg));
            x[b] = gamma_l;
          }
        }

    std::vector<int> rate_rows;
    for (int k = 0; k < 2; ++k)
    {
      ConcaveExpr rate;
      for (int i = 0; i < N; ++i)
      {
        if (b_var[k][0][i] < 0)
          continue;
        const double c = alloc.Q[k][i] * b0 / (2.0 * s2 * H2);
        rate.add(LogAffine{alloc.rho_I[i] / (T * kLn2), 1.0,
                           {{b_var[k][0][i], c}, {b_var[k][1][i], c}}});
      }
      rate.add(R, -1.0);
      rate_rows.push_back(static_cast<int>(spec.constraints.size()));
      spec.constraints.push_back(std::move(rate));

      if (spent[k] <= 0.0)
        continue;
      ConcaveExpr energy;
      energy.constant = -1.0;
      const double unit = etaP * b0 / H2 / spent[k];
      for (int i = 0; i < N; ++i)
      {
        const int n = i + 1;
        if (a_var[k][0][i] >= 0)
        {
          // coherent part, (a1 + a2)^2 replaced by its tangent
          const double s_l = x[a_var[k][0][i]] + x[a_var[k][1][i]];
          const double w = alloc.rho_E[k][i] * unit;
          energy.constant -= w * s_l * s_l;
          energy.add(a_var[k][0][i], 2.0 * w * s_l);
          energy.add(a_var[k][1][i], 2.0 * w * s_l);
        }
        const double leak_time = alloc.rho_E[1 - k][i];
        if (leak_time > 0.0)
          for (int m = 0; m < 2; ++m)
          {
            const double u_l = H2 + squared_norm(inc.q[m][n] - cfg.devices[k]);
            const double w = leak_time * unit * H2;
            energy.constant += w * (2.0 / u_l - H2 / (u_l * u_l));
            energy.add(pv.neg_sq_dist(m, n, cfg.devices[k], w / (u_l * u_l)));
          }
      }
      spec.constraints.push_back(std::move(energy));
    }
    detail::add_trajectory_constraints(spec, pv, inc, cfg, radius);

    x[R] = epigraph_start(spec, rate_rows, x, R);
    const convex::SolveOutcome out = convex::solve_concave_from(spec, x, opts.barrier);
    if (!usable(out))
      return std::nullopt;
    return pv.extract(out.x);
  };
  const auto evaluate = [&](const Trajectory& t) { return checked_rate(alloc, t, cfg); };
  const double radius = std::max(cfg.max_step() * N / 8.0, cfg.min_separation);
  Trajectory best = detail::sca_pass(traj, *start_rate, solve, evaluate, opts, radius, trace);
  SlackState slacks = slacks_at(best, cfg);
  return {std::move(best), std::move(slacks)};
}

SolveReportCoMP solve_comp_from(const ScenarioConfig& cfg, const Trajectory& traj,
                               const AllocationCoMP& alloc, Initialization init,
                               const ScaOptions& opts)
{
  const auto t0 = std::chrono::steady_clock::now();
  SolveReportCoMP rep;
  rep.init = init;
  rep.trajectory = traj;
  rep.allocation = optimize_time_comp(cfg, traj, alloc, opts);
  double rate = common_throughput_comp(rep.allocation, rep.trajectory, cfg);
  rep.trace.push_back(rate);

  for (int it = 0; it < opts.max_outer; ++it)
  {
    rep.allocation = optimize_time_comp(cfg, rep.trajectory, rep.allocation, opts);
    rep.allocation = optimize_power_comp(cfg, rep.trajectory, rep.allocation, opts);
    if (opts.optimize_trajectory)
    {
      rep.inner_traces.emplace_back();
      rep.trajectory = optimize_traj_comp(cfg, rep.allocation, rep.trajectory, opts,
                                          &rep.inner_traces.back())
                           .trajectory;
    }
    const double next = common_throughput_comp(rep.allocation, rep.trajectory, cfg);
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
  rep.feasibility = check_comp(rep.allocation, rep.trajectory, cfg);
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

SolveReportCoMP solve_comp(const ScenarioConfig& cfg, const ScaOptions& opts)
{
  cfg.validate();
  const analytic::HoverSolutionCoMP hover = analytic::solve_infinite_comp(cfg);
  const AllocationCoMP alloc = initial_allocation_comp(cfg, hover);
  if (opts.force_init != Initialization::DirectFlight)
    if (auto shf = shf_trajectory_comp(cfg, hover))
      return solve_comp_from(cfg, *shf, alloc, Initialization::SHF, opts);
  return solve_comp_from(cfg, direct_flight(cfg), alloc, Initialization::DirectFlight, opts);
}

SolveReportCoMP benchmark_direct_comp(const ScenarioConfig& cfg, const ScaOptions& opts)
{
  ScaOptions o = opts;
  o.force_init = Initialization::DirectFlight;
  o.optimize_trajectory = false;
  return solve_comp(cfg, o);
}

}  // namespace wpcn::sca
