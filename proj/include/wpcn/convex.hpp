#pragma once

#include <Eigen/Core>
#include <functional>
#include <limits>
#include <optional>
#include <variant>
#include <vector>

namespace wpcn::convex
{

using Vec = Eigen::VectorXd;

struct LinearTerm
{
  int var = 0;
  double coef = 0.0;
};
using LinearForm = std::vector<LinearTerm>;

/// Value and first two derivatives of a concave scalar curve. A value of
/// -infinity marks a point outside the curve's domain.
struct CurvePoint
{
  double value = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
};

// Concave building blocks. Each acts on a handful of variables.

/// weight * ln(constant + affine . x), weight > 0.
struct LogAffine
{
  double weight = 1.0;
  double constant = 0.0;
  LinearForm affine;
};

/// -weight * sum_r (rows[r] . x + offsets[r])^2, weight >= 0.
struct NegSquaredNorm
{
  double weight = 1.0;
  std::vector<LinearForm> rows;
  std::vector<double> offsets;
};

/// -weight * x[numerator]^2 / x[denominator], defined for x[denominator] > 0.
struct NegQuadOverLin
{
  double weight = 1.0;
  int numerator = 0;
  int denominator = 0;
};

/// curve(constant + affine . x) for a concave curve.
struct ConcaveOfAffine
{
  double constant = 0.0;
  LinearForm affine;
  std::function<CurvePoint(double)> curve;
};

using Term = std::variant<LogAffine, NegSquaredNorm, NegQuadOverLin, ConcaveOfAffine>;

/// constant + linear . x + sum of concave terms.
struct ConcaveExpr
{
  double constant = 0.0;
  LinearForm linear;
  std::vector<Term> terms;

  ConcaveExpr& add(int var, double coef)
  {
    linear.push_back({var, coef});
    return *this;
  }
  ConcaveExpr& add(Term term)
  {
    terms.push_back(std::move(term));
    return *this;
  }
  /// Multiplies the whole expression by s > 0.
  void scale(double s);
};

/// maximize objective(x) subject to constraints[i](x) >= 0 and eq_rows x = eq_rhs.
struct SmoothConcaveProgramSpec
{
  int num_vars = 0;
  ConcaveExpr objective;
  std::vector<ConcaveExpr> constraints;
  std::vector<LinearForm> eq_rows;
  std::vector<double> eq_rhs;
};

/// maximize objective . x subject to lower <= row . x <= upper and variable
/// bounds. A row with lower == upper is an equality.
struct LinearProgramSpec
{
  struct Row
  {
    LinearForm coeffs;
    double lower = -std::numeric_limits<double>::infinity();
    double upper = std::numeric_limits<double>::infinity();
  };

  int num_vars = 0;
  std::vector<double> objective;
  std::vector<Row> rows;
  std::vector<double> var_lower;  // empty: unbounded
  std::vector<double> var_upper;
};

enum class SolveStatus
{
  Optimal,
  MaxIter,
  Infeasible,
  StartInfeasible
};

const char* to_string(SolveStatus status);

struct SolveOutcome
{
  Vec x;
  double objective = 0.0;
  double dual_bound = 0.0;    // objective + m/t at the last centering
  double duality_gap = 0.0;
  double stationarity = 0.0;  // KKT stationarity residual (inf-norm)
  double gradient_scale = 0.0;
  double max_violation = 0.0;  // inequality and equality violation at x
  int newton_steps = 0;
  int centering_steps = 0;
  SolveStatus status = SolveStatus::MaxIter;
};

struct BarrierOptions
{
  double mu = 10.0;              // barrier parameter growth per centering
  double alpha = 0.25;           // Armijo fraction
  double beta = 0.5;             // backtracking factor
  double gap_tol = 1e-9;         // stop when m/t <= gap_tol * (1 + |objective|)
  double newton_tol = 1e-12;     // lambda^2 / 2 threshold for centering
  int max_newton = 600;
  double t0 = 0.0;               // <= 0 selects t automatically
  int dense_threshold = 160;     // problems up to this size use dense factorization
  int low_rank_threshold = 24;   // constraint gradients with more nonzeros go to the low-rank part
};

/// Log-barrier method from a strictly feasible start. Returns StartInfeasible
/// when `start` violates an inequality or leaves a term's domain.
SolveOutcome solve_concave(const SmoothConcaveProgramSpec& spec, const Vec& start,
                           const BarrierOptions& opts = {});

/// Phase-1 search for a strictly feasible point starting from a point in the
/// domain of every term. Returns nullopt when the problem has no strictly
/// feasible point.
std::optional<Vec> find_interior_point(const SmoothConcaveProgramSpec& spec, const Vec& start,
                                       const BarrierOptions& opts = {});

/// Runs phase 1 when needed, then solve_concave.
SolveOutcome solve_concave_from(const SmoothConcaveProgramSpec& spec, const Vec& start,
                                const BarrierOptions& opts = {});

SolveOutcome solve_lp(const LinearProgramSpec& spec, const BarrierOptions& opts = {});

/// Value of an expression (-infinity outside its domain).
double evaluate(const ConcaveExpr& expr, const Vec& x);

/// Smallest constraint value, i.e. the strict-feasibility margin.
double min_constraint(const SmoothConcaveProgramSpec& spec, const Vec& x);

}  // namespace wpcn::convex
