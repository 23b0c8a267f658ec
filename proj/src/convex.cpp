#include "wpcn/convex.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

namespace wpcn::convex
{

namespace
{

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double dot(const LinearForm& form, const Vec& x)
{
  double s = 0.0;
  for (const auto& t : form)
    s += t.coef * x[t.var];
  return s;
}

// Dense scratch accumulator for sparse gradients.
struct SparseAccumulator
{
  std::vector<double> values;
  std::vector<int> touched;
  std::vector<char> mark;

  explicit SparseAccumulator(int n) : values(n, 0.0), mark(n, 0) {}

  void add(int i, double v)
  {
    if (!mark[i])
    {
      mark[i] = 1;
      touched.push_back(i);
    }
    values[i] += v;
  }
  void add(const LinearForm& form, double scale)
  {
    for (const auto& t : form)
      add(t.var, scale * t.coef);
  }
  // Moves the contents into (idx, val) and clears.
  void drain(std::vector<int>& idx, std::vector<double>& val)
  {
    std::sort(touched.begin(), touched.end());
    idx.assign(touched.begin(), touched.end());
    val.resize(idx.size());
    for (std::size_t k = 0; k < idx.size(); ++k)
    {
      val[k] = values[idx[k]];
      values[idx[k]] = 0.0;
      mark[idx[k]] = 0;
    }
    touched.clear();
  }
};

// Receives entries of a symmetric PSD matrix. Dense mode fills both triangles,
// sparse mode stores the lower triangle as triplets.
struct HessianSink
{
  Eigen::MatrixXd* dense = nullptr;
  std::vector<Eigen::Triplet<double>>* triplets = nullptr;

  void add(int i, int j, double v)
  {
    if (dense)
    {
      (*dense)(i, j) += v;
      if (i != j)
        (*dense)(j, i) += v;
    }
    else
    {
      if (i < j)
        std::swap(i, j);
      triplets->emplace_back(i, j, v);
    }
  }
  // scale * a a^T with duplicate indices allowed.
  void add_outer(const LinearForm& a, double scale)
  {
    for (std::size_t p = 0; p < a.size(); ++p)
    {
      add(a[p].var, a[p].var, scale * a[p].coef * a[p].coef);
      for (std::size_t q = 0; q < p; ++q)
        add(a[p].var, a[q].var, scale * a[p].coef * a[q].coef);
    }
  }
};

double term_value(const Term& term, const Vec& x)
{
  return std::visit(
      [&](const auto& t) -> double {
        using T = std::decay_t<decltype(t)>;
        if constexpr (std::is_same_v<T, LogAffine>)
        {
          const double z = t.constant + dot(t.affine, x);
          return z > 0.0 ? t.weight * std::log(z) : kNegInf;
        }
        else if constexpr (std::is_same_v<T, NegSquaredNorm>)
        {
          double s = 0.0;
          for (std::size_t r = 0; r < t.rows.size(); ++r)
          {
            const double v = dot(t.rows[r], x) + t.offsets[r];
            s += v * v;
          }
          return -t.weight * s;
        }
        else if constexpr (std::is_same_v<T, NegQuadOverLin>)
        {
          const double b = x[t.denominator];
          if (!(b > 0.0))
            return kNegInf;
          const double a = x[t.numerator];
          return -t.weight * a * a / b;
        }
        else
        {
          return t.curve(t.constant + dot(t.affine, x)).value;
        }
      },
      term);
}

void term_gradient(const Term& term, const Vec& x, double scale, SparseAccumulator& acc)
{
  std::visit(
      [&](const auto& t) {
        using T = std::decay_t<decltype(t)>;
        if constexpr (std::is_same_v<T, LogAffine>)
        {
          const double z = t.constant + dot(t.affine, x);
          acc.add(t.affine, scale * t.weight / z);
        }
        else if constexpr (std::is_same_v<T, NegSquaredNorm>)
        {
          for (std::size_t r = 0; r < t.rows.size(); ++r)
          {
            const double v = dot(t.rows[r], x) + t.offsets[r];
            acc.add(t.rows[r], -2.0 * scale * t.weight * v);
          }
        }
        else if constexpr (std::is_same_v<T, NegQuadOverLin>)
        {
          const double a = x[t.numerator];
          const double b = x[t.denominator];
          acc.add(t.numerator, -2.0 * scale * t.weight * a / b);
          acc.add(t.denominator, scale * t.weight * a * a / (b * b));
        }
        else
        {
          const CurvePoint c = t.curve(t.constant + dot(t.affine, x));
          acc.add(t.affine, scale * c.d1);
        }
      },
      term);
}

// Adds scale * (-Hessian of the term), which is PSD.
void term_neg_hessian(const Term& term, const Vec& x, double scale, HessianSink& sink)
{
  std::visit(
      [&](const auto& t) {
        using T = std::decay_t<decltype(t)>;
        if constexpr (std::is_same_v<T, LogAffine>)
        {
          const double z = t.constant + dot(t.affine, x);
          sink.add_outer(t.affine, scale * t.weight / (z * z));
        }
        else if constexpr (std::is_same_v<T, NegSquaredNorm>)
        {
          for (const auto& row : t.rows)
            sink.add_outer(row, 2.0 * scale * t.weight);
        }
        else if constexpr (std::is_same_v<T, NegQuadOverLin>)
        {
          const double a = x[t.numerator];
          const double b = x[t.denominator];
          const double c = 2.0 * scale * t.weight / b;
          const LinearForm v{{t.numerator, 1.0}, {t.denominator, -a / b}};
          sink.add_outer(v, c);
        }
        else
        {
          const CurvePoint c = t.curve(t.constant + dot(t.affine, x));
          sink.add_outer(t.affine, -scale * std::min(c.d2, 0.0));
        }
      },
      term);
}

void expr_gradient(const ConcaveExpr& e, const Vec& x, double scale, SparseAccumulator& acc)
{
  acc.add(e.linear, scale);
  for (const auto& term : e.terms)
    term_gradient(term, x, scale, acc);
}

void expr_neg_hessian(const ConcaveExpr& e, const Vec& x, double scale, HessianSink& sink)
{
  for (const auto& term : e.terms)
    term_neg_hessian(term, x, scale, sink);
}

// Solves (S + U U^T) y = b where S is given by lower triplets. The system is
// first scaled symmetrically to unit diagonal. Small problems use a dense
// Cholesky. Larger ones factor S + eps I sparsely, apply Woodbury for U and
// polish with preconditioned CG.
class NewtonSystem
{
public:
  NewtonSystem(int n, bool dense) : n_(n), dense_(dense) {}

  bool is_dense() const { return dense_; }

  void reset(int rank)
  {
    if (dense_)
      M_.setZero(n_, n_);
    else
      triplets_.clear();
    U_.setZero(n_, rank);
  }

  HessianSink sink()
  {
    HessianSink s;
    if (dense_)
      s.dense = &M_;
    else
      s.triplets = &triplets_;
    return s;
  }

  Eigen::MatrixXd& low_rank() { return U_; }

  bool factor()
  {
    if (dense_)
    {
      if (U_.cols() > 0)
        M_.noalias() += U_ * U_.transpose();
      scale_ = unit_scaling(M_.diagonal());
      M_ = scale_.asDiagonal() * M_ * scale_.asDiagonal();
      double reg = 0.0;
      for (int attempt = 0; attempt < 8; ++attempt)
      {
        Eigen::MatrixXd A = M_;
        if (reg > 0.0)
          A.diagonal().array() += reg;
        llt_.compute(A);
        if (llt_.info() == Eigen::Success)
          return true;
        reg = reg == 0.0 ? 1e-14 : reg * 100.0;
      }
      return false;
    }

    S_.resize(n_, n_);
    S_.setFromTriplets(triplets_.begin(), triplets_.end());
    Vec diag = S_.diagonal();
    for (int c = 0; c < U_.cols(); ++c)
      diag += U_.col(c).cwiseAbs2();
    scale_ = unit_scaling(diag);
    S_ = scale_.asDiagonal() * S_ * scale_.asDiagonal();
    U_ = scale_.asDiagonal() * U_;
    Eigen::SparseMatrix<double> Se = S_;
    for (int i = 0; i < n_; ++i)
      Se.coeffRef(i, i) += 1e-9;
    if (!analyzed_)
    {
      ldlt_.analyzePattern(Se);
      analyzed_ = true;
    }
    ldlt_.factorize(Se);
    if (ldlt_.info() != Eigen::Success)
      return false;
    if (U_.cols() > 0)
    {
      SinvU_ = ldlt_.solve(U_);
      Eigen::MatrixXd cap = Eigen::MatrixXd::Identity(U_.cols(), U_.cols());
      cap.noalias() += U_.transpose() * SinvU_;
      cap_.compute(cap);
      if (cap_.info() != Eigen::Success)
        return false;
    }
    return true;
  }

  Vec solve(const Vec& b) const
  {
    const Vec bs = scale_.cwiseProduct(b);
    if (dense_)
      return scale_.cwiseProduct(llt_.solve(bs));
    return scale_.cwiseProduct(pcg(bs));
  }

  Eigen::MatrixXd solve(const Eigen::MatrixXd& B) const
  {
    Eigen::MatrixXd X(B.rows(), B.cols());
    for (int c = 0; c < B.cols(); ++c)
      X.col(c) = solve(Vec(B.col(c)));
    return X;
  }

private:
  static Vec unit_scaling(const Vec& diag)
  {
    Vec d(diag.size());
    const double floor = std::max(diag.cwiseAbs().maxCoeff(), 1e-300) * 1e-30;
    for (int i = 0; i < diag.size(); ++i)
      d[i] = 1.0 / std::sqrt(std::max(diag[i], floor));
    return d;
  }

  Vec apply(const Vec& v) const
  {
    Vec out = S_.selfadjointView<Eigen::Lower>() * v;
    if (U_.cols() > 0)
      out.noalias() += U_ * (U_.transpose() * v);
    return out;
  }

  Vec precondition(const Vec& r) const
  {
    Vec y = ldlt_.solve(r);
    if (U_.cols() > 0)
      y.noalias() -= SinvU_ * cap_.solve(U_.transpose() * y);
    return y;
  }

  Vec pcg(const Vec& b) const
  {
    Vec x = precondition(b);
    Vec r = b - apply(x);
    const double bnorm = b.norm();
    if (bnorm == 0.0)
      return x;
    Vec z = precondition(r);
    Vec p = z;
    double rz = r.dot(z);
    for (int it = 0; it < 200 && r.norm() > 1e-14 * bnorm; ++it)
    {
      const Vec Ap = apply(p);
      const double pAp = p.dot(Ap);
      if (!(pAp > 0.0))
        break;
      const double a = rz / pAp;
      x += a * p;
      r -= a * Ap;
      z = precondition(r);
      const double rz_next = r.dot(z);
      p = z + (rz_next / rz) * p;
      rz = rz_next;
    }
    return x;
  }

  int n_;
  bool dense_;
  Vec scale_;
  Eigen::MatrixXd M_;
  Eigen::LLT<Eigen::MatrixXd> llt_;
  std::vector<Eigen::Triplet<double>> triplets_;
  Eigen::SparseMatrix<double> S_;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>, Eigen::Lower> ldlt_;
  bool analyzed_ = false;
  Eigen::MatrixXd U_;
  Eigen::MatrixXd SinvU_;
  Eigen::LLT<Eigen::MatrixXd> cap_;
};

class BarrierSolver
{
public:
  BarrierSolver(const SmoothConcaveProgramSpec& spec, const BarrierOptions& opts)
      : spec_(spec),
        opts_(opts),
        n_(spec.num_vars),
        m_(static_cast<int>(spec.constraints.size())),
        p_(static_cast<int>(spec.eq_rows.size())),
        acc_(spec.num_vars),
        system_(spec.num_vars, spec.num_vars <= opts.dense_threshold)
  {
    A_.setZero(p_, n_);
    for (int r = 0; r < p_; ++r)
      for (const auto& t : spec.eq_rows[r])
        A_(r, t.var) += t.coef;
    // Route each constraint's gradient/Hessian once: structural support size
    // decides between the sparse and the low-rank part.
    for (int i = 0; i < m_; ++i)
    {
      std::vector<int> support;
      const auto& c = spec.constraints[i];
      for (const auto& t : c.linear)
        support.push_back(t.var);
      for (const auto& term : c.terms)
        std::visit(
            [&](const auto& t) {
              using T = std::decay_t<decltype(t)>;
              if constexpr (std::is_same_v<T, NegSquaredNorm>)
              {
                for (const auto& row : t.rows)
                  for (const auto& l : row)
                    support.push_back(l.var);
              }
              else if constexpr (std::is_same_v<T, NegQuadOverLin>)
              {
                support.push_back(t.numerator);
                support.push_back(t.denominator);
              }
              else
              {
                for (const auto& l : t.affine)
                  support.push_back(l.var);
              }
            },
            term);
      std::sort(support.begin(), support.end());
      support.erase(std::unique(support.begin(), support.end()), support.end());
      const bool low_rank =
          !system_.is_dense() && static_cast<int>(support.size()) > opts.low_rank_threshold;
      if (low_rank)
        low_rank_.push_back(i);
    }
  }

  // Barrier value -t g(x) - sum log f_i(x); +inf outside the domain.
  double barrier(const Vec& x, double t) const
  {
    const double g = evaluate(spec_.objective, x);
    if (!std::isfinite(g))
      return std::numeric_limits<double>::infinity();
    double phi = -t * g;
    for (const auto& c : spec_.constraints)
    {
      const double f = evaluate(c, x);
      if (!(f > 0.0) || !std::isfinite(f))
        return std::numeric_limits<double>::infinity();
      phi -= std::log(f);
    }
    return phi;
  }

  // Gradient of the barrier and Hessian assembled into system_.
  Vec assemble(const Vec& x, double t, std::vector<double>* fvals = nullptr)
  {
    system_.reset(static_cast<int>(low_rank_.size()));
    HessianSink sink = system_.sink();
    Vec grad = Vec::Zero(n_);

    std::vector<int> idx;
    std::vector<double> val;
    expr_gradient(spec_.objective, x, 1.0, acc_);
    acc_.drain(idx, val);
    for (std::size_t k = 0; k < idx.size(); ++k)
      grad[idx[k]] -= t * val[k];
    expr_neg_hessian(spec_.objective, x, t, sink);

    if (fvals)
      fvals->assign(m_, 0.0);
    std::size_t lr = 0;
    for (int i = 0; i < m_; ++i)
    {
      const auto& c = spec_.constraints[i];
      const double f = evaluate(c, x);
      if (fvals)
        (*fvals)[i] = f;
      expr_gradient(c, x, 1.0, acc_);
      acc_.drain(idx, val);
      for (std::size_t k = 0; k < idx.size(); ++k)
        grad[idx[k]] -= val[k] / f;
      expr_neg_hessian(c, x, 1.0 / f, sink);
      if (lr < low_rank_.size() && low_rank_[lr] == i)
      {
        auto col = system_.low_rank().col(static_cast<int>(lr));
        for (std::size_t k = 0; k < idx.size(); ++k)
          col[idx[k]] += val[k] / f;
        ++lr;
      }
      else
      {
        for (std::size_t p = 0; p < idx.size(); ++p)
        {
          const double vp = val[p] / f;
          for (std::size_t q = 0; q <= p; ++q)
            sink.add(idx[p], idx[q], vp * val[q] / f);
        }
      }
    }
    if (!system_.is_dense())
      for (int i = 0; i < n_; ++i)
        sink.add(i, i, 0.0);  // keeps the sparsity pattern complete
    return grad;
  }

  // Newton step with equality constraints via the Schur complement.
  bool newton_step(const Vec& grad, Vec& dx)
  {
    if (!system_.factor())
      return false;
    const Vec Mg = system_.solve(Vec(-grad));
    if (p_ == 0)
    {
      dx = Mg;
      return dx.allFinite();
    }
    const Eigen::MatrixXd MAt = system_.solve(Eigen::MatrixXd(A_.transpose()));
    Eigen::MatrixXd schur = A_ * MAt;
    const Vec rhs = A_ * Mg;
    const Vec nu = schur.ldlt().solve(rhs);
    dx = Mg - MAt * nu;
    return dx.allFinite();
  }

  double pick_t0(const Vec& x)
  {
    if (opts_.t0 > 0.0)
      return opts_.t0;
    if (m_ == 0)
      return 1.0;
    // t minimizing || t c + d ||_{M^-1} with c = -grad g, d = grad of the log
    // barrier at x. M is the log-barrier Hessian alone.
    const Vec d = assemble(x, 0.0);
    if (!system_.factor())
      return 1.0;
    SparseAccumulator& acc = acc_;
    std::vector<int> idx;
    std::vector<double> val;
    expr_gradient(spec_.objective, x, 1.0, acc);
    acc.drain(idx, val);
    Vec c = Vec::Zero(n_);
    for (std::size_t k = 0; k < idx.size(); ++k)
      c[idx[k]] = -val[k];
    const Vec Mc = system_.solve(c);
    const double cMc = c.dot(Mc);
    const double dMc = d.dot(Mc);
    double t = cMc > 0.0 ? -dMc / cMc : 0.0;
    if (!std::isfinite(t) || t <= 0.0)
    {
      const double g = std::abs(evaluate(spec_.objective, x));
      t = m_ / std::max(1.0, g);
    }
    return std::clamp(t, 1e-10, 1e10);
  }

  // Newton iterations on the barrier at fixed t. Returns true when progress
  // stopped before reaching tol (factorization or line search failure).
  bool center(Vec& x, double t, double tol, int& newton, int max_newton)
  {
    // Near the center rounding in t * gradient puts a floor under lambda^2.
    // Once it stops shrinking for a few local steps the point is centered.
    double prev_lambda2 = std::numeric_limits<double>::infinity();
    int flat = 0;
    while (newton < max_newton)
    {
      const Vec grad = assemble(x, t);
      Vec dx;
      if (!newton_step(grad, dx))
        return true;
      ++newton;
      const double lambda2 = -grad.dot(dx);
      if (!(lambda2 > 0.0) || lambda2 / 2.0 <= tol)
        return false;
      if (lambda2 < 1e-6)
      {
        flat = lambda2 > 0.25 * prev_lambda2 ? flat + 1 : 0;
        if (flat >= 3)
          return false;
      }
      prev_lambda2 = lambda2;
      // Close to the center the full step is taken once it stays in the
      // domain; the barrier value is too large to resolve the Armijo decrease.
      const bool local = lambda2 < 1e-6;
      const double phi0 = barrier(x, t);
      double s = 1.0;
      bool accepted = false;
      for (int ls = 0; ls < 80; ++ls)
      {
        const Vec xn = x + s * dx;
        const double phin = barrier(xn, t);
        if (std::isfinite(phin) && (local || phin <= phi0 - opts_.alpha * s * lambda2))
        {
          x = xn;
          accepted = true;
          break;
        }
        s *= opts_.beta;
      }
      if (!accepted)
        return true;
    }
    return false;
  }

  SolveOutcome run(const Vec& start)
  {
    SolveOutcome out;
    out.x = start;
    if (start.size() != n_)
      throw std::invalid_argument("solve_concave: start has wrong dimension");
    if (!std::isfinite(barrier(start, 0.0)) || !std::isfinite(evaluate(spec_.objective, start)))
    {
      out.status = SolveStatus::StartInfeasible;
      out.objective = evaluate(spec_.objective, start);
      return out;
    }

    Vec x = start;
    double t = pick_t0(x);
    bool stalled = false;
    int newton = 0;

    double last_t = t;
    while (true)
    {
      stalled = center(x, t, opts_.newton_tol, newton, opts_.max_newton);
      ++out.centering_steps;
      last_t = t;
      const double g = evaluate(spec_.objective, x);
      const double gap = m_ / t;
      if (early_stop && early_stop(x))
      {
        out.status = SolveStatus::Optimal;
        break;
      }
      if (gap <= opts_.gap_tol * (1.0 + std::abs(g)))
      {
        out.status = SolveStatus::Optimal;
        center(x, t, 1e-20, newton, newton + 6);
        break;
      }
      if (stalled)
      {
        out.status =
            gap <= 10.0 * opts_.gap_tol * (1.0 + std::abs(g)) ? SolveStatus::Optimal : SolveStatus::MaxIter;
        break;
      }
      if (newton >= opts_.max_newton)
      {
        out.status = SolveStatus::MaxIter;
        break;
      }
      t *= opts_.mu;
    }

    out.x = x;
    out.newton_steps = newton;
    out.objective = evaluate(spec_.objective, x);
    out.duality_gap = m_ / last_t;
    out.dual_bound = out.objective + out.duality_gap;
    diagnostics(x, last_t, out);
    return out;
  }

  void diagnostics(const Vec& x, double t, SolveOutcome& out)
  {
    std::vector<int> idx;
    std::vector<double> val;
    Vec r = Vec::Zero(n_);
    expr_gradient(spec_.objective, x, 1.0, acc_);
    acc_.drain(idx, val);
    double scale = 0.0;
    for (std::size_t k = 0; k < idx.size(); ++k)
    {
      r[idx[k]] += val[k];
      scale = std::max(scale, std::abs(val[k]));
    }
    double viol = 0.0;
    for (const auto& c : spec_.constraints)
    {
      const double f = evaluate(c, x);
      viol = std::max(viol, -f);
      const double lambda = 1.0 / (t * f);
      expr_gradient(c, x, 1.0, acc_);
      acc_.drain(idx, val);
      for (std::size_t k = 0; k < idx.size(); ++k)
      {
        r[idx[k]] += lambda * val[k];
        scale = std::max(scale, std::abs(lambda * val[k]));
      }
    }
    if (p_ > 0)
    {
      const Eigen::MatrixXd At = A_.transpose();
      const Vec nu = At.colPivHouseholderQr().solve(-r);
      r += At * nu;
      Vec b(p_);
      for (int i = 0; i < p_; ++i)
        b[i] = spec_.eq_rhs[i];
      viol = std::max(viol, (A_ * x - b).cwiseAbs().maxCoeff());
    }
    out.stationarity = r.cwiseAbs().maxCoeff();
    out.gradient_scale = scale;
    out.max_violation = std::max(viol, 0.0);
  }

private:
  const SmoothConcaveProgramSpec& spec_;
  BarrierOptions opts_;
  int n_;
  int m_;
public:
  /// Checked after every centering step; true ends the run.
  std::function<bool(const Vec&)> early_stop;
private:
  int p_;
  SparseAccumulator acc_;
  NewtonSystem system_;
  std::vector<int> low_rank_;
  Eigen::MatrixXd A_;
};

Vec project_to_equalities(const SmoothConcaveProgramSpec& spec, const Vec& x)
{
  const int p = static_cast<int>(spec.eq_rows.size());
  if (p == 0)
    return x;
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(p, spec.num_vars);
  Vec b(p);
  for (int r = 0; r < p; ++r)
  {
    for (const auto& t : spec.eq_rows[r])
      A(r, t.var) += t.coef;
    b[r] = spec.eq_rhs[r];
  }
  const Vec resid = b - A * x;
  if (resid.cwiseAbs().maxCoeff() <= 1e-12 * (1.0 + b.cwiseAbs().maxCoeff()))
    return x;
  return x + A.transpose() * (A * A.transpose()).ldlt().solve(resid);
}

}  // namespace

const char* to_string(SolveStatus status)
{
  switch (status)
  {
    case SolveStatus::Optimal:
      return "optimal";
    case SolveStatus::MaxIter:
      return "max_iter";
    case SolveStatus::Infeasible:
      return "infeasible";
    case SolveStatus::StartInfeasible:
      return "start_infeasible";
  }
  return "unknown";
}

void ConcaveExpr::scale(double s)
{
  constant *= s;
  for (auto& t : linear)
    t.coef *= s;
  for (auto& term : terms)
    std::visit(
        [&](auto& t) {
          using T = std::decay_t<decltype(t)>;
          if constexpr (std::is_same_v<T, ConcaveOfAffine>)
          {
            auto inner = t.curve;
            t.curve = [inner, s](double z) {
              CurvePoint c = inner(z);
              return CurvePoint{s * c.value, s * c.d1, s * c.d2};
            };
          }
          else
            t.weight *= s;
        },
        term);
}

double evaluate(const ConcaveExpr& expr, const Vec& x)
{
  double v = expr.constant + dot(expr.linear, x);
  for (const auto& term : expr.terms)
  {
    const double tv = term_value(term, x);
    if (!std::isfinite(tv))
      return kNegInf;
    v += tv;
  }
  return v;
}

double min_constraint(const SmoothConcaveProgramSpec& spec, const Vec& x)
{
  double m = std::numeric_limits<double>::infinity();
  for (const auto& c : spec.constraints)
    m = std::min(m, evaluate(c, x));
  return m;
}

SolveOutcome solve_concave(const SmoothConcaveProgramSpec& spec, const Vec& start,
                           const BarrierOptions& opts)
{
  BarrierSolver solver(spec, opts);
  return solver.run(start);
}

std::optional<Vec> find_interior_point(const SmoothConcaveProgramSpec& spec, const Vec& start,
                                       const BarrierOptions& opts)
{
  const Vec x0 = project_to_equalities(spec, start);
  const double margin0 = min_constraint(spec, x0);
  if (!std::isnan(margin0) && margin0 > 0.0)
    return x0;
  // Every term must be finite at x0; only the constraint values may be <= 0.
  for (const auto& c : spec.constraints)
    for (const auto& term : c.terms)
      if (!std::isfinite(term_value(term, x0)))
        return std::nullopt;

  // maximize s subject to f_i(x) - s >= 0, s <= cap.
  const int n = spec.num_vars;
  SmoothConcaveProgramSpec p1;
  p1.num_vars = n + 1;
  p1.objective.add(n, 1.0);
  p1.eq_rows = spec.eq_rows;
  p1.eq_rhs = spec.eq_rhs;
  double fmin = std::numeric_limits<double>::infinity();
  double fscale = 0.0;
  for (const auto& c : spec.constraints)
  {
    ConcaveExpr e = c;
    e.add(n, -1.0);
    p1.constraints.push_back(std::move(e));
    const double f = evaluate(c, x0);
    fmin = std::min(fmin, f);
    fscale = std::max(fscale, std::abs(f));
  }
  const double s0 = fmin - std::max(1e-3 * std::max(fscale, 1e-12), 0.5 * std::abs(fmin));
  const double cap = std::abs(fmin) + std::max(fscale, 1e-12);
  ConcaveExpr capc;
  capc.constant = cap;
  capc.add(n, -1.0);
  p1.constraints.push_back(capc);
  // A variable that only loosens constraints (an epigraph variable, say)
  // would leave the phase-1 barrier unbounded; a wide ball keeps it bounded.
  const double radius = 1e3 * std::max(1.0, x0.cwiseAbs().maxCoeff());
  NegSquaredNorm ball;
  ball.weight = 1.0 / (radius * radius);
  for (int i = 0; i < n; ++i)
  {
    ball.rows.push_back({{i, 1.0}});
    ball.offsets.push_back(-x0[i]);
  }
  ConcaveExpr ballc;
  ballc.constant = 1.0;
  ballc.add(std::move(ball));
  p1.constraints.push_back(std::move(ballc));

  Vec z(n + 1);
  z.head(n) = x0;
  z[n] = s0;

  BarrierOptions o = opts;
  o.t0 = 0.0;
  o.gap_tol = 1e-10;
  BarrierSolver solver(p1, o);
  solver.early_stop = [&spec, n](const Vec& v) {
    return min_constraint(spec, v.head(n)) > 0.0;
  };
  SolveOutcome r = solver.run(z);
  if (r.status == SolveStatus::StartInfeasible)
    return std::nullopt;
  const Vec x = r.x.head(n);
  if (min_constraint(spec, x) > 0.0)
    return x;
  return std::nullopt;
}

SolveOutcome solve_concave_from(const SmoothConcaveProgramSpec& spec, const Vec& start,
                                const BarrierOptions& opts)
{
  const double margin = min_constraint(spec, start);
  Vec x = start;
  if (!(margin > 0.0) || !spec.eq_rows.empty())
  {
    auto interior = find_interior_point(spec, start, opts);
    if (!interior)
    {
      SolveOutcome out;
      out.x = start;
      out.objective = evaluate(spec.objective, start);
      out.status = SolveStatus::Infeasible;
      return out;
    }
    x = *interior;
  }
  return solve_concave(spec, x, opts);
}

SolveOutcome solve_lp(const LinearProgramSpec& lp, const BarrierOptions& opts)
{
  const int n = lp.num_vars;
  SmoothConcaveProgramSpec spec;
  spec.num_vars = n;
  for (int j = 0; j < n && j < static_cast<int>(lp.objective.size()); ++j)
    if (lp.objective[j] != 0.0)
      spec.objective.add(j, lp.objective[j]);

  Vec start = Vec::Zero(n);
  for (int j = 0; j < n; ++j)
  {
    const double lo = lp.var_lower.empty() ? -std::numeric_limits<double>::infinity() : lp.var_lower[j];
    const double hi = lp.var_upper.empty() ? std::numeric_limits<double>::infinity() : lp.var_upper[j];
    if (std::isfinite(lo) && std::isfinite(hi))
    {
      if (hi < lo)
      {
        SolveOutcome out;
        out.x = start;
        out.status = SolveStatus::Infeasible;
        return out;
      }
      if (hi == lo)
      {
        spec.eq_rows.push_back({{j, 1.0}});
        spec.eq_rhs.push_back(lo);
        start[j] = lo;
        continue;
      }
      start[j] = 0.5 * (lo + hi);
    }
    else if (std::isfinite(lo))
      start[j] = lo + 1.0;
    else if (std::isfinite(hi))
      start[j] = hi - 1.0;
    if (std::isfinite(lo))
    {
      ConcaveExpr e;
      e.constant = -lo;
      e.add(j, 1.0);
      spec.constraints.push_back(e);
    }
    if (std::isfinite(hi))
    {
      ConcaveExpr e;
      e.constant = hi;
      e.add(j, -1.0);
      spec.constraints.push_back(e);
    }
  }
  for (const auto& row : lp.rows)
  {
    if (row.lower == row.upper)
    {
      spec.eq_rows.push_back(row.coeffs);
      spec.eq_rhs.push_back(row.lower);
      continue;
    }
    if (std::isfinite(row.lower))
    {
      ConcaveExpr e;
      e.constant = -row.lower;
      e.linear = row.coeffs;
      spec.constraints.push_back(e);
    }
    if (std::isfinite(row.upper))
    {
      ConcaveExpr e;
      e.constant = row.upper;
      for (const auto& t : row.coeffs)
        e.add(t.var, -t.coef);
      spec.constraints.push_back(e);
    }
  }

  auto interior = find_interior_point(spec, start, opts);
  if (!interior)
  {
    SolveOutcome out;
    out.x = start;
    out.status = SolveStatus::Infeasible;
    return out;
  }
  if (spec.objective.linear.empty())
  {
    BarrierSolver diag(spec, opts);
    SolveOutcome out;
    out.x = *interior;
    out.status = SolveStatus::Optimal;
    diag.diagnostics(out.x, 1e300, out);
    return out;
  }
  return solve_concave(spec, *interior, opts);
}

}  // namespace wpcn::convex
