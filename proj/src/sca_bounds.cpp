#include "wpcn/sca_bounds.hpp"

#include <cmath>
#include <numbers>

namespace wpcn::sca
{

namespace
{
constexpr double kLog2e = std::numbers::log2e;
}

double rate_lower_bound_power(double Q_own, double Q_other, double Q_other_l, double g_own,
                              double g_cross, const ScenarioConfig& cfg)
{
  const double s2 = cfg.noise_sigma2;
  const double denom_l = Q_other_l * g_cross + s2;
  return std::log2(Q_own * g_own + Q_other * g_cross + s2) - std::log2(denom_l) -
         g_cross * kLog2e / denom_l * (Q_other - Q_other_l);
}

namespace
{

// log2(sum_i Q_i g_i + sigma^2) linearised in d_i = |q - w_i|^2 around q_l.
double useful_term_bound(Point2 q, Point2 q_l, std::array<double, 2> Q,
                         const ScenarioConfig& cfg)
{
  const double H2 = cfg.altitude_H * cfg.altitude_H;
  const double b0 = cfg.ref_gain_beta0;
  double total_l = cfg.noise_sigma2;
  std::array<double, 2> d_l{};
  for (int i = 0; i < 2; ++i)
  {
    d_l[i] = squared_norm(q_l - cfg.devices[i]);
    total_l += Q[i] * b0 / (d_l[i] + H2);
  }
  double value = std::log2(total_l);
  for (int i = 0; i < 2; ++i)
  {
    const double u = d_l[i] + H2;
    const double c = Q[i] * b0 / (u * u) * kLog2e / total_l;
    value -= c * (squared_norm(q - cfg.devices[i]) - d_l[i]);
  }
  return value;
}

}  // namespace

double rate_lower_bound_traj(Point2 q, Point2 q_l, std::array<double, 2> Q, int k,
                             const ScenarioConfig& cfg)
{
  const int other = 1 - k;
  const double H2 = cfg.altitude_H * cfg.altitude_H;
  const double interference =
      std::log2(Q[other] * cfg.ref_gain_beta0 / (squared_norm(q - cfg.devices[other]) + H2) +
                cfg.noise_sigma2);
  return useful_term_bound(q, q_l, Q, cfg) - interference;
}

double rate_lower_bound_traj_concave(Point2 q, Point2 q_l, std::array<double, 2> Q, int k,
                                     const ScenarioConfig& cfg)
{
  const int other = 1 - k;
  const double H2 = cfg.altitude_H * cfg.altitude_H;
  const Point2 e_l = q_l - cfg.devices[other];
  // tangent of |q - w|^2 never exceeds it; the interference log decreases in it
  const double d_tan = squared_norm(e_l) + 2.0 * dot(e_l, q - q_l);
  const double u = d_tan + H2;
  if (!(u > 0.0))
    return -INFINITY;
  const double interference =
      std::log2(Q[other] * cfg.ref_gain_beta0 / u + cfg.noise_sigma2);
  return useful_term_bound(q, q_l, Q, cfg) - interference;
}

double gain_lower_bound(Point2 q, Point2 q_l, Point2 w, const ScenarioConfig& cfg)
{
  const double H2 = cfg.altitude_H * cfg.altitude_H;
  const double u_l = H2 + squared_norm(q_l - w);
  const double u = H2 + squared_norm(q - w);
  return cfg.ref_gain_beta0 * (2.0 / u_l - u / (u_l * u_l));
}

double energy_lower_bound_ic(std::array<Point2, 2> q, std::array<Point2, 2> q_l, double delta_E,
                             int k, const ScenarioConfig& cfg)
{
  double g = 0.0;
  for (int m = 0; m < 2; ++m)
    g += gain_lower_bound(q[m], q_l[m], cfg.devices[k], cfg);
  return cfg.eh_efficiency_eta * cfg.uav_tx_power_P * delta_E * g;
}

double separation_lower_bound(Point2 q1, Point2 q2, Point2 q1_l, Point2 q2_l)
{
  const Point2 d_l = q1_l - q2_l;
  return -squared_norm(d_l) + 2.0 * dot(d_l, q1 - q2);
}

double coherent_sum_lower_bound(double a1, double a2, double a1_l, double a2_l)
{
  const double s_l = a1_l + a2_l;
  return s_l * s_l + 2.0 * s_l * (a1 + a2 - s_l);
}

double inverse_lower_bound(double b, double b_l)
{
  return 1.0 / b_l - (b - b_l) / (b_l * b_l);
}

}  // namespace wpcn::sca
