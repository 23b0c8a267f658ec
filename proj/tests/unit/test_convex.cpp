#include "doctest.h"

#include <cmath>
#include <random>

#include "wpcn/convex.hpp"

using namespace wpcn::convex;

namespace
{

ConcaveExpr bound_above(int var, double hi)
{
  ConcaveExpr e;
  e.constant = hi;
  e.add(var, -1.0);
  return e;
}

ConcaveExpr bound_below(int var, double lo)
{
  ConcaveExpr e;
  e.constant = -lo;
  e.add(var, 1.0);
  return e;
}

}  // namespace

TEST_CASE("lp: max x on [0,1]")
{
  LinearProgramSpec lp;
  lp.num_vars = 1;
  lp.objective = {1.0};
  lp.var_lower = {0.0};
  lp.var_upper = {1.0};
  const SolveOutcome r = solve_lp(lp);
  CHECK(r.status == SolveStatus::Optimal);
  CHECK(r.x[0] == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(r.max_violation <= 1e-8);
  CHECK(r.duality_gap <= 1e-8 * (1.0 + std::abs(r.objective)));
}

TEST_CASE("lp: zero objective returns a feasible point")
{
  LinearProgramSpec lp;
  lp.num_vars = 2;
  lp.objective = {0.0, 0.0};
  lp.var_lower = {0.0, 0.0};
  lp.var_upper = {1.0, 1.0};
  lp.rows.push_back({{{0, 1.0}, {1, 1.0}}, 0.5, 1.5});
  const SolveOutcome r = solve_lp(lp);
  CHECK(r.status == SolveStatus::Optimal);
  CHECK(r.x[0] + r.x[1] >= 0.5);
  CHECK(r.x[0] + r.x[1] <= 1.5);
  CHECK(r.max_violation == 0.0);
}

TEST_CASE("lp: infeasible bounds are detected")
{
  LinearProgramSpec lp;
  lp.num_vars = 2;
  lp.objective = {1.0, 1.0};
  lp.var_lower = {0.0, 0.0};
  lp.var_upper = {1.0, 1.0};
  lp.rows.push_back({{{0, 1.0}, {1, 1.0}}, 3.0, std::numeric_limits<double>::infinity()});
  CHECK(solve_lp(lp).status == SolveStatus::Infeasible);
}

TEST_CASE("lp: equality row")
{
  // max x + 2y, x + y = 1, 0 <= x, y <= 0.75 -> y = 0.75
  LinearProgramSpec lp;
  lp.num_vars = 2;
  lp.objective = {1.0, 2.0};
  lp.var_lower = {0.0, 0.0};
  lp.var_upper = {10.0, 0.75};
  lp.rows.push_back({{{0, 1.0}, {1, 1.0}}, 1.0, 1.0});
  const SolveOutcome r = solve_lp(lp);
  REQUIRE(r.status == SolveStatus::Optimal);
  CHECK(r.x[1] == doctest::Approx(0.75).epsilon(1e-7));
  CHECK(r.x[0] == doctest::Approx(0.25).epsilon(1e-7));
  CHECK(r.max_violation <= 1e-8);
}

TEST_CASE("lp: two-slot split against a grid")
{
  // Per slot: charge for e_n, transmit for 1 - e_n. Rates c_n (1 - e_n),
  // budget sum p_n (1 - e_n) <= sum h_n e_n. Maximise the rate sum.
  const double c[2] = {2.0, 1.0};
  const double h[2] = {0.5, 1.5};
  const double p[2] = {1.0, 1.0};

  LinearProgramSpec lp;
  lp.num_vars = 2;
  lp.objective = {-c[0], -c[1]};
  lp.var_lower = {0.0, 0.0};
  lp.var_upper = {1.0, 1.0};
  // sum (h_n + p_n) e_n >= sum p_n
  lp.rows.push_back({{{0, h[0] + p[0]}, {1, h[1] + p[1]}}, p[0] + p[1],
                     std::numeric_limits<double>::infinity()});
  const SolveOutcome r = solve_lp(lp);
  INFO("gap ", r.duality_gap, " newton ", r.newton_steps, " obj ", r.objective);
  REQUIRE(r.status == SolveStatus::Optimal);
  const double rate = c[0] * (1 - r.x[0]) + c[1] * (1 - r.x[1]);

  double best = -1.0;
  for (int i = 0; i <= 10000; ++i)
    for (int j = 0; j <= 10000; j += 1)
    {
      const double e0 = i * 1e-4;
      const double e1 = j * 1e-4;
      if ((h[0] + p[0]) * e0 + (h[1] + p[1]) * e1 < p[0] + p[1])
        continue;
      best = std::max(best, c[0] * (1 - e0) + c[1] * (1 - e1));
      break;  // smallest feasible e1 is best for this e0
    }
  CHECK(rate == doctest::Approx(best).epsilon(1e-3));
  CHECK(rate >= best - 1e-9);
}

TEST_CASE("concave: max log(1+x) on [0,3]")
{
  SmoothConcaveProgramSpec s;
  s.num_vars = 1;
  s.objective.add(LogAffine{1.0, 1.0, {{0, 1.0}}});
  s.constraints = {bound_below(0, 0.0), bound_above(0, 3.0)};
  Vec x0(1);
  x0 << 1.0;
  const SolveOutcome r = solve_concave(s, x0);
  REQUIRE(r.status == SolveStatus::Optimal);
  CHECK(r.x[0] == doctest::Approx(3.0).epsilon(1e-8));
  CHECK(r.objective <= r.dual_bound);
  CHECK(r.stationarity <= 1e-6 * (1.0 + r.gradient_scale));
}

TEST_CASE("concave: max-min via epigraph")
{
  // vars x, y, R
  SmoothConcaveProgramSpec s;
  s.num_vars = 3;
  s.objective.add(2, 1.0);
  for (int v = 0; v < 2; ++v)
  {
    ConcaveExpr e;
    e.add(LogAffine{1.0, 1.0, {{v, 1.0}}});
    e.add(2, -1.0);
    s.constraints.push_back(e);
    s.constraints.push_back(bound_below(v, 0.0));
  }
  ConcaveExpr sum;
  sum.constant = 2.0;
  sum.add(0, -1.0).add(1, -1.0);
  s.constraints.push_back(sum);

  Vec x0(3);
  x0 << 0.2, 0.7, 0.0;
  const SolveOutcome r = solve_concave(s, x0);
  REQUIRE(r.status == SolveStatus::Optimal);
  CHECK(r.x[0] == doctest::Approx(1.0).epsilon(1e-7));
  CHECK(r.x[1] == doctest::Approx(1.0).epsilon(1e-7));
  CHECK(r.objective == doctest::Approx(std::log(2.0)).epsilon(1e-9));
}

TEST_CASE("concave: start outside the feasible set")
{
  SmoothConcaveProgramSpec s;
  s.num_vars = 1;
  s.objective.add(0, 1.0);
  s.constraints = {bound_below(0, 0.0), bound_above(0, 1.0)};
  Vec x0(1);
  x0 << 2.0;
  CHECK(solve_concave(s, x0).status == SolveStatus::StartInfeasible);

  const SolveOutcome r = solve_concave_from(s, x0);
  REQUIRE(r.status == SolveStatus::Optimal);
  CHECK(r.x[0] == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("concave: quad-over-lin and outside-domain start")
{
  // max a - a^2 / b  s.t. b <= 2  -> a = b / 2 = 1, value 1/2... with b free in (0,2]
  SmoothConcaveProgramSpec s;
  s.num_vars = 2;
  s.objective.add(0, 1.0).add(NegQuadOverLin{1.0, 0, 1});
  s.constraints = {bound_above(1, 2.0)};
  Vec x0(2);
  x0 << 0.0, 1.0;
  const SolveOutcome r = solve_concave(s, x0);
  REQUIRE(r.status == SolveStatus::Optimal);
  CHECK(r.x[1] == doctest::Approx(2.0).epsilon(1e-7));
  CHECK(r.x[0] == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(r.objective == doctest::Approx(0.5).epsilon(1e-8));

  x0 << 0.0, -1.0;
  CHECK(solve_concave(s, x0).status == SolveStatus::StartInfeasible);
}

TEST_CASE("concave: two-slot single-UAV surrogate against a grid")
{
  // maximise sum_n log(1 + a - |q_n - w|^2) with |q_1 - q_0| <= V, |q_2 - q_1| <= V.
  // vars q1x q1y q2x q2y s1 s2, s_n >= |q_n - w|^2.
  const double a = 10.0;
  const double V = 0.5;
  const double q0[2] = {0.0, 0.0};
  const double w[2] = {1.3, 0.4};

  SmoothConcaveProgramSpec s;
  s.num_vars = 6;
  for (int n = 0; n < 2; ++n)
  {
    s.objective.add(LogAffine{1.0, 1.0 + a, {{4 + n, -1.0}}});
    ConcaveExpr e;
    e.add(4 + n, 1.0);
    e.add(NegSquaredNorm{1.0, {{{2 * n, 1.0}}, {{2 * n + 1, 1.0}}}, {-w[0], -w[1]}});
    s.constraints.push_back(e);
  }
  ConcaveExpr step1;
  step1.constant = V * V;
  step1.add(NegSquaredNorm{1.0, {{{0, 1.0}}, {{1, 1.0}}}, {-q0[0], -q0[1]}});
  s.constraints.push_back(step1);
  ConcaveExpr step2;
  step2.constant = V * V;
  step2.add(NegSquaredNorm{1.0, {{{2, 1.0}, {0, -1.0}}, {{3, 1.0}, {1, -1.0}}}, {0.0, 0.0}});
  s.constraints.push_back(step2);

  Vec x0 = Vec::Zero(6);
  x0[4] = x0[5] = 5.0;
  const SolveOutcome r = solve_concave(s, x0);
  REQUIRE(r.status == SolveStatus::Optimal);

  auto value = [&](double x1, double y1) {
    const double d1 = (x1 - w[0]) * (x1 - w[0]) + (y1 - w[1]) * (y1 - w[1]);
    const double dist = std::sqrt(d1);
    const double d2 = dist <= V ? 0.0 : (dist - V) * (dist - V);
    return std::log(1.0 + a - d1) + std::log(1.0 + a - d2);
  };
  double best = -1e300;
  const double h = 1e-3;
  const int M = static_cast<int>(V / h);
  for (int i = -M; i <= M; ++i)
    for (int j = -M; j <= M; ++j)
    {
      const double x1 = i * h;
      const double y1 = j * h;
      if (x1 * x1 + y1 * y1 > V * V)
        continue;
      best = std::max(best, value(x1, y1));
    }
  CHECK(r.objective == doctest::Approx(best).epsilon(1e-4));
  CHECK(r.objective >= best - 1e-9);
}

TEST_CASE("concave: sparse low-rank path agrees with the dense path")
{
  // max R s.t. sum_i c_ij log(1 + x_i) >= R for j = 0..2, sum x_i <= n, 0 <= x_i <= 3,
  // plus chained constraints x_{i+1} - x_i <= 0.5.
  const int n = 200;
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.2, 1.0);
  SmoothConcaveProgramSpec s;
  s.num_vars = n + 1;
  s.objective.add(n, 1.0);
  for (int j = 0; j < 3; ++j)
  {
    ConcaveExpr e;
    for (int i = 0; i < n; ++i)
      e.add(LogAffine{u(rng), 1.0, {{i, 1.0}}});
    e.add(n, -1.0);
    s.constraints.push_back(e);
  }
  ConcaveExpr total;
  total.constant = static_cast<double>(n);
  for (int i = 0; i < n; ++i)
  {
    total.add(i, -1.0);
    s.constraints.push_back(bound_below(i, 0.0));
    s.constraints.push_back(bound_above(i, 3.0));
    if (i + 1 < n)
    {
      ConcaveExpr c;
      c.constant = 0.5;
      c.add(i + 1, -1.0).add(i, 1.0);
      s.constraints.push_back(c);
    }
  }
  s.constraints.push_back(total);
  Vec x0 = Vec::Constant(n + 1, 0.5);
  x0[n] = 0.0;

  BarrierOptions dense;
  dense.dense_threshold = 10000;
  BarrierOptions sparse;
  sparse.dense_threshold = 0;
  const SolveOutcome rd = solve_concave(s, x0, dense);
  const SolveOutcome rs = solve_concave(s, x0, sparse);
  INFO("dense gap ", rd.duality_gap, " newton ", rd.newton_steps, " obj ", rd.objective);
  INFO("sparse gap ", rs.duality_gap, " newton ", rs.newton_steps, " obj ", rs.objective);
  REQUIRE(rd.status == SolveStatus::Optimal);
  REQUIRE(rs.status == SolveStatus::Optimal);
  CHECK(rs.objective == doctest::Approx(rd.objective).epsilon(1e-8));
  CHECK((rs.x - rd.x).cwiseAbs().maxCoeff() < 1e-4);
}

TEST_CASE("concave: deterministic")
{
  SmoothConcaveProgramSpec s;
  s.num_vars = 2;
  s.objective.add(LogAffine{1.0, 1.0, {{0, 1.0}}}).add(LogAffine{2.0, 1.0, {{1, 1.0}}});
  ConcaveExpr c;
  c.constant = 1.0;
  c.add(NegSquaredNorm{1.0, {{{0, 1.0}}, {{1, 1.0}}}, {0.0, 0.0}});
  s.constraints.push_back(c);
  Vec x0 = Vec::Zero(2);
  const SolveOutcome a = solve_concave(s, x0);
  const SolveOutcome b = solve_concave(s, x0);
  CHECK(a.status == SolveStatus::Optimal);
  CHECK(a.x == b.x);
  CHECK(a.objective == b.objective);
  CHECK(a.newton_steps == b.newton_steps);
}

TEST_CASE("phase one reports infeasible concave problems")
{
  SmoothConcaveProgramSpec s;
  s.num_vars = 2;
  ConcaveExpr disk;
  disk.constant = 1.0;
  disk.add(NegSquaredNorm{1.0, {{{0, 1.0}}, {{1, 1.0}}}, {0.0, 0.0}});
  s.constraints = {disk, bound_below(0, 2.0)};
  Vec x0 = Vec::Zero(2);
  CHECK_FALSE(find_interior_point(s, x0).has_value());
}
