#pragma once

// Brute-force reference solutions for small subproblems. Everything here is
// written from the model equations directly and shares no code with the
// solvers under test.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "wpcn/scenario.hpp"

namespace oracle
{

using wpcn::Point2;
using wpcn::ScenarioConfig;
using wpcn::Trajectory;

inline double gain(Point2 q, Point2 w, const ScenarioConfig& c)
{
  const double dx = q.x - w.x;
  const double dy = q.y - w.y;
  return c.ref_gain_beta0 / (dx * dx + dy * dy + c.altitude_H * c.altitude_H);
}

/// max c.x subject to A x <= b by enumerating every vertex. Only for tiny
/// problems; the feasible set must be bounded.
inline double lp_vertex_max(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                            const Eigen::VectorXd& c)
{
  const int m = static_cast<int>(A.rows());
  const int n = static_cast<int>(A.cols());
  double best = -std::numeric_limits<double>::infinity();
  std::vector<int> pick(n);
  for (int i = 0; i < n; ++i)
    pick[i] = i;
  const double scale = 1.0 + b.cwiseAbs().maxCoeff();
  while (true)
  {
    Eigen::MatrixXd M(n, n);
    Eigen::VectorXd r(n);
    for (int i = 0; i < n; ++i)
    {
      M.row(i) = A.row(pick[i]);
      r[i] = b[pick[i]];
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(M);
    if (lu.rank() == n)
    {
      const Eigen::VectorXd x = lu.solve(r);
      if (((A * x - b).array() <= 1e-9 * scale).all())
        best = std::max(best, c.dot(x));
    }
    int i = n - 1;
    while (i >= 0 && pick[i] == m - n + i)
      --i;
    if (i < 0)
      break;
    ++pick[i];
    for (int j = i + 1; j < n; ++j)
      pick[j] = pick[j - 1] + 1;
  }
  return best;
}

/// Optimal common rate of the interference-coordination time split with the
/// trajectory and device powers held fixed.
/// Variables: delta_E[0..N), delta_I[0..N), R.
inline double time_split_ic(const ScenarioConfig& c, const Trajectory& t,
                            const std::array<std::vector<double>, 2>& Q)
{
  const int N = t.num_slots();
  const int nv = 2 * N + 1;
  std::vector<Eigen::VectorXd> rows;
  std::vector<double> rhs;
  const auto add = [&](Eigen::VectorXd a, double v) {
    // keep rows O(1) so the vertex feasibility test is scale free
    const double s = a.cwiseAbs().maxCoeff();
    rows.push_back(a / s);
    rhs.push_back(v / s);
  };
  for (int k = 0; k < 2; ++k)
  {
    Eigen::VectorXd rate = Eigen::VectorXd::Zero(nv);
    Eigen::VectorXd energy = Eigen::VectorXd::Zero(nv);
    for (int i = 0; i < N; ++i)
    {
      const auto& q = t.q;
      const double sig = Q[k][i] * gain(q[k][i + 1], c.devices[k], c);
      const double itf = Q[1 - k][i] * gain(q[k][i + 1], c.devices[1 - k], c);
      rate[N + i] = -std::log2(1.0 + sig / (itf + c.noise_sigma2)) / c.mission_T;
      energy[i] = -c.eh_efficiency_eta * c.uav_tx_power_P *
                  (gain(q[0][i + 1], c.devices[k], c) + gain(q[1][i + 1], c.devices[k], c));
      energy[N + i] = Q[k][i];
    }
    rate[2 * N] = 1.0;
    add(rate, 0.0);
    add(energy, 0.0);
  }
  for (int i = 0; i < N; ++i)
  {
    Eigen::VectorXd slot = Eigen::VectorXd::Zero(nv);
    slot[i] = slot[N + i] = 1.0;
    add(slot, c.slot());
    for (int j : {i, N + i})
    {
      Eigen::VectorXd neg = Eigen::VectorXd::Zero(nv);
      neg[j] = -1.0;
      add(neg, 0.0);
    }
  }
  Eigen::MatrixXd A(rows.size(), nv);
  Eigen::VectorXd b(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r)
  {
    A.row(r) = rows[r];
    b[r] = rhs[r];
  }
  Eigen::VectorXd obj = Eigen::VectorXd::Zero(nv);
  obj[2 * N] = 1.0;
  return lp_vertex_max(A, b, obj);
}

/// CoMP time split with fixed trajectory and powers.
/// Variables: rho_E1[0..N), rho_E2[0..N), rho_I[0..N), R.
inline double time_split_comp(const ScenarioConfig& c, const Trajectory& t,
                              const std::array<std::vector<double>, 2>& Q)
{
  const int N = t.num_slots();
  const int nv = 3 * N + 1;
  std::vector<Eigen::VectorXd> rows;
  std::vector<double> rhs;
  const auto add = [&](Eigen::VectorXd a, double v) {
    const double s = a.cwiseAbs().maxCoeff();
    rows.push_back(a / s);
    rhs.push_back(v / s);
  };
  const double etaP = c.eh_efficiency_eta * c.uav_tx_power_P;
  for (int k = 0; k < 2; ++k)
  {
    Eigen::VectorXd rate = Eigen::VectorXd::Zero(nv);
    Eigen::VectorXd energy = Eigen::VectorXd::Zero(nv);
    for (int i = 0; i < N; ++i)
    {
      const double g0 = gain(t.q[0][i + 1], c.devices[k], c);
      const double g1 = gain(t.q[1][i + 1], c.devices[k], c);
      const double amp = std::sqrt(g0) + std::sqrt(g1);
      rate[2 * N + i] = -std::log2(1.0 + Q[k][i] * (g0 + g1) / (2.0 * c.noise_sigma2)) /
                        c.mission_T;
      energy[k * N + i] = -etaP * amp * amp;
      energy[(1 - k) * N + i] = -etaP * (g0 + g1);
      energy[2 * N + i] = Q[k][i];
    }
    rate[3 * N] = 1.0;
    add(rate, 0.0);
    add(energy, 0.0);
  }
  for (int i = 0; i < N; ++i)
  {
    Eigen::VectorXd slot = Eigen::VectorXd::Zero(nv);
    slot[i] = slot[N + i] = slot[2 * N + i] = 1.0;
    add(slot, c.slot());
    for (int j : {i, N + i, 2 * N + i})
    {
      Eigen::VectorXd neg = Eigen::VectorXd::Zero(nv);
      neg[j] = -1.0;
      add(neg, 0.0);
    }
  }
  Eigen::MatrixXd A(rows.size(), nv);
  Eigen::VectorXd b(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r)
  {
    A.row(r) = rows[r];
    b[r] = rhs[r];
  }
  Eigen::VectorXd obj = Eigen::VectorXd::Zero(nv);
  obj[3 * N] = 1.0;
  return lp_vertex_max(A, b, obj);
}

/// Two-slot interference-coordination power problem with fixed time split:
/// exhaustive grid over the four powers, then repeated finer grids around
/// the best point. `budget[k]` is device k's harvested energy.
inline double power_ic_two_slots(const ScenarioConfig& c, const Trajectory& t,
                                 const std::array<double, 2>& delta_I,
                                 const std::array<double, 2>& budget, int grid = 40,
                                 std::array<std::array<double, 2>, 2>* argmax = nullptr)
{
  // p[k][i] in [0, 1] is the share of device k's budget spent in slot i;
  // power = share * budget / delta_I.
  using Shares = std::array<std::array<double, 2>, 2>;
  // pull a trial point back onto the feasible set
  const auto project = [](Shares p) {
    for (auto& d : p)
    {
      d[0] = std::max(0.0, d[0]);
      d[1] = std::max(0.0, d[1]);
      const double sum = d[0] + d[1];
      if (sum > 1.0)
      {
        d[0] /= sum;
        d[1] /= sum;
      }
    }
    return p;
  };
  const auto value = [&](const Shares& p) {
    std::array<double, 2> r{0.0, 0.0};
    for (int i = 0; i < 2; ++i)
    {
      const double Q0 = p[0][i] * budget[0] / delta_I[i];
      const double Q1 = p[1][i] * budget[1] / delta_I[i];
      const std::array<double, 2> Q{Q0, Q1};
      for (int k = 0; k < 2; ++k)
      {
        const Point2 uav = t.q[k][i + 1];
        const double sinr = Q[k] * gain(uav, c.devices[k], c) /
                            (Q[1 - k] * gain(uav, c.devices[1 - k], c) + c.noise_sigma2);
        r[k] += delta_I[i] * std::log2(1.0 + sinr) / c.mission_T;
      }
    }
    return std::min(r[0], r[1]);
  };
  std::vector<std::pair<double, Shares>> coarse;
  for (int a = 0; a <= grid; ++a)
    for (int b = 0; a + b <= grid; ++b)
      for (int d = 0; d <= grid; ++d)
        for (int e = 0; d + e <= grid; ++e)
        {
          const Shares p{{{double(a) / grid, double(b) / grid}, {double(d) / grid, double(e) / grid}}};
          coarse.push_back({value(p), p});
        }
  std::partial_sort(coarse.begin(), coarse.begin() + 10, coarse.end(),
                    [](const auto& x, const auto& y) { return x.first > y.first; });
  std::vector<Shares> seeds;
  for (int i = 0; i < 10; ++i)
    seeds.push_back(coarse[i].second);
  // every device puts its whole budget into one slot
  for (int u = 0; u < 2; ++u)
    for (int v = 0; v < 2; ++v)
    {
      Shares p{};
      p[0][u] = 1.0;
      p[1][v] = 1.0;
      seeds.push_back(p);
    }

  // zoom: full 4D grid around the incumbent, box halved once it stops moving
  Shares best{};
  double best_v = -std::numeric_limits<double>::infinity();
  constexpr int kSide = 4;
  for (const Shares& seed : seeds)
  {
    Shares cur = seed;
    double cur_v = value(seed);
    for (double half = 2.0 / grid; half > 1e-10;)
    {
      const Shares centre = cur;
      for (int a = -kSide; a <= kSide; ++a)
        for (int b = -kSide; b <= kSide; ++b)
          for (int d = -kSide; d <= kSide; ++d)
            for (int e = -kSide; e <= kSide; ++e)
            {
              Shares p = centre;
              p[0][0] += half * a / kSide;
              p[0][1] += half * b / kSide;
              p[1][0] += half * d / kSide;
              p[1][1] += half * e / kSide;
              p = project(p);
              const double v = value(p);
              if (v > cur_v)
              {
                cur_v = v;
                cur = p;
              }
            }
      if (cur == centre)
        half *= 0.5;
    }
    if (cur_v > best_v)
    {
      best_v = cur_v;
      best = cur;
    }
  }
  if (argmax)
    *argmax = best;
  return best_v;
}

/// max sum_i w_i log2(1 + a_i Q_i) subject to sum_i d_i Q_i <= E, Q >= 0, by
/// water filling with a bisection on the water level.
inline double water_fill(const std::vector<double>& w, const std::vector<double>& a,
                         const std::vector<double>& d, double E)
{
  // KKT: Q_i = max(0, w_i / (d_i nu ln2) - 1 / a_i)
  const auto spend = [&](double nu) {
    double s = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i)
      s += d[i] * std::max(0.0, w[i] / (d[i] * nu * std::log(2.0)) - 1.0 / a[i]);
    return s;
  };
  double lo = 1e-300;
  double hi = 1.0;
  while (spend(hi) > E)
    hi *= 2.0;
  for (int it = 0; it < 400; ++it)
  {
    const double mid = std::sqrt(lo * hi);
    (spend(mid) > E ? lo : hi) = mid;
  }
  double v = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i)
  {
    const double Q = std::max(0.0, w[i] / (d[i] * hi * std::log(2.0)) - 1.0 / a[i]);
    v += w[i] * std::log2(1.0 + a[i] * Q);
  }
  return v;
}

}  // namespace oracle
