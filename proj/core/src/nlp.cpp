#include "guidesim/nlp.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

namespace guidesim {

namespace {

VecX project(const VecX& x, const VecX& lo, const VecX& hi) {
  return x.cwiseMax(lo).cwiseMin(hi);
}

struct AlState {
  VecX lambda;  // multiplier estimates, >= 0
  double rho = 10.0;
};

struct RawEval {
  double f = 0.0;
  VecX grad_f;
  VecX g;
  MatX jac;
};

class AlFunction {
 public:
  AlFunction(const NlpProblem& p, const AlState& s) : p_(p), s_(s) {
    g_buf_.resize(p.num_constraints);
    jac_buf_.resize(p.num_constraints, p.dimension);
  }

  // Value only (line search).
  double value(const VecX& x) {
    double f = p_.objective(x, nullptr);
    check_finite(f, x);
    if (p_.num_constraints > 0) {
      p_.constraints(x, g_buf_, nullptr);
      f += penalty(g_buf_, x);
    }
    return f;
  }

  // Value and gradient (accepted iterates).
  double value_and_gradient(const VecX& x, VecX& grad) {
    double f = p_.objective(x, &grad);
    check_finite(f, x);
    if (!grad.allFinite()) throw NumericFailure("non-finite objective gradient", x);
    if (p_.num_constraints > 0) {
      p_.constraints(x, g_buf_, &jac_buf_);
      f += penalty(g_buf_, x);
      for (int i = 0; i < p_.num_constraints; ++i) {
        const double w = std::max(0.0, s_.lambda(i) + s_.rho * g_buf_(i));
        if (w != 0.0) grad.noalias() += w * jac_buf_.row(i).transpose();
      }
    }
    return f;
  }

 private:
  double penalty(const VecX& g, const VecX& x) {
    double acc = 0.0;
    for (int i = 0; i < g.size(); ++i) {
      if (!std::isfinite(g(i))) throw NumericFailure("non-finite constraint value", x);
      const double t = std::max(0.0, s_.lambda(i) + s_.rho * g(i));
      acc += t * t - s_.lambda(i) * s_.lambda(i);
    }
    return acc / (2.0 * s_.rho);
  }

  void check_finite(double f, const VecX& x) {
    if (!std::isfinite(f)) throw NumericFailure("non-finite objective value", x);
  }

  const NlpProblem& p_;
  const AlState& s_;
  VecX g_buf_;
  MatX jac_buf_;
};

struct InnerResult {
  VecX x;
  double stationarity = 0.0;
  int iterations = 0;
};

// Box-projected L-BFGS with Armijo backtracking along the projection arc.
InnerResult minimize_inner(AlFunction& fn, const VecX& x0, const VecX& lo, const VecX& hi,
                           double tol, int max_iter, int memory,
                           std::vector<double>* merit) {
  InnerResult res;
  VecX x = project(x0, lo, hi);
  VecX grad(x.size());
  double f = fn.value_and_gradient(x, grad);
  if (merit) merit->push_back(f);

  std::deque<std::pair<VecX, VecX>> pairs;  // (s, y)
  VecX d(x.size()), x_new(x.size()), grad_new(x.size());

  for (int it = 0; it < max_iter; ++it) {
    const double stat = (x - project(x - grad, lo, hi)).cwiseAbs().maxCoeff();
    res.stationarity = stat;
    if (stat <= tol) break;

    // Two-loop recursion.
    d = -grad;
    if (!pairs.empty()) {
      std::vector<double> alpha(pairs.size());
      for (int i = static_cast<int>(pairs.size()) - 1; i >= 0; --i) {
        const auto& [s, y] = pairs[static_cast<size_t>(i)];
        alpha[static_cast<size_t>(i)] = s.dot(d) / y.dot(s);
        d.noalias() -= alpha[static_cast<size_t>(i)] * y;
      }
      const auto& [s_last, y_last] = pairs.back();
      d *= s_last.dot(y_last) / y_last.dot(y_last);
      for (size_t i = 0; i < pairs.size(); ++i) {
        const auto& [s, y] = pairs[i];
        const double beta = y.dot(d) / y.dot(s);
        d.noalias() += (alpha[i] - beta) * s;
      }
    }
    if (d.dot(grad) >= 0.0) d = -grad;  // safeguard: fall back to steepest descent

    // Armijo on the projection arc.
    double step = 1.0;
    bool accepted = false;
    double f_new = f;
    for (int ls = 0; ls < 50; ++ls) {
      x_new = project(x + step * d, lo, hi);
      const VecX dx = x_new - x;
      if (dx.cwiseAbs().maxCoeff() == 0.0) break;
      f_new = fn.value(x_new);
      if (f_new <= f + 1e-4 * grad.dot(dx)) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    ++res.iterations;
    if (!accepted) break;

    f_new = fn.value_and_gradient(x_new, grad_new);
    VecX s = x_new - x;
    VecX y = grad_new - grad;
    const double sy = s.dot(y);
    if (sy > 1e-12 * s.norm() * y.norm()) {
      pairs.emplace_back(std::move(s), std::move(y));
      if (static_cast<int>(pairs.size()) > memory) pairs.pop_front();
    }
    x = x_new;
    f = f_new;
    grad = grad_new;
  }
  res.x = x;
  return res;
}

double max_violation_of(const VecX& g) {
  double v = 0.0;
  for (int i = 0; i < g.size(); ++i) v = std::max(v, g(i));
  return std::max(0.0, v);
}

}  // namespace

NlpSolution minimize(const NlpProblem& problem, const NlpOptions& options) {
  const int n = problem.dimension;
  const int m = problem.num_constraints;

  AlState state;
  state.lambda = VecX::Zero(m);
  state.rho = options.penalty_initial;

  VecX lo = problem.lower.size() == n
                ? problem.lower
                : VecX::Constant(n, -std::numeric_limits<double>::infinity());
  VecX hi = problem.upper.size() == n
                ? problem.upper
                : VecX::Constant(n, std::numeric_limits<double>::infinity());

  VecX x = project(problem.initial, lo, hi);
  VecX g(m);
  MatX jac_unused;

  NlpSolution best;
  best.point = x;
  best.objective = problem.objective(x, nullptr);
  if (m > 0) {
    problem.constraints(x, g, nullptr);
    best.max_violation = max_violation_of(g);
  }
  bool have_feasible = best.max_violation <= options.tol_feasibility;

  double inner_tol = std::max(1e-2, options.tol_stationarity);
  double prev_violation = std::numeric_limits<double>::infinity();

  for (int outer = 0; outer < options.max_outer; ++outer) {
    AlFunction fn(problem, state);
    InnerResult inner =
        minimize_inner(fn, x, lo, hi, inner_tol, options.max_inner, options.lbfgs_memory);
    x = inner.x;
    best.inner_iterations += inner.iterations;
    best.outer_iterations = outer + 1;

    const double f = problem.objective(x, nullptr);
    double violation = 0.0;
    if (m > 0) {
      problem.constraints(x, g, nullptr);
      violation = max_violation_of(g);
    }

    // Keep the best feasible-leaning iterate seen so far.
    const bool feasible = violation <= options.tol_feasibility;
    if ((feasible && (!have_feasible || f < best.objective)) ||
        (!have_feasible && violation < best.max_violation)) {
      best.point = x;
      best.objective = f;
      best.max_violation = violation;
      have_feasible = have_feasible || feasible;
    }

    if (feasible && inner.stationarity <= options.tol_stationarity) {
      best.point = x;
      best.objective = f;
      best.max_violation = violation;
      best.converged = true;
      break;
    }

    if (m > 0) {
      for (int i = 0; i < m; ++i) {
        state.lambda(i) = std::max(0.0, state.lambda(i) + state.rho * g(i));
      }
      if (violation > 0.25 * prev_violation && violation > options.tol_feasibility) {
        state.rho = std::min(state.rho * options.penalty_growth, 1e12);
      }
      prev_violation = violation;
    } else if (inner.stationarity <= options.tol_stationarity) {
      best.point = x;
      best.objective = f;
      best.converged = true;
      break;
    }
    inner_tol = std::max(inner_tol * 0.2, options.tol_stationarity);
  }

  // Honest reporting: re-evaluate at the returned point.
  best.objective = problem.objective(best.point, nullptr);
  if (m > 0) {
    problem.constraints(best.point, g, nullptr);
    best.max_violation = max_violation_of(g);
  }
  return best;
}

double gradient_check(const std::function<double(const VecX&, VecX*)>& f, const VecX& x,
                      double step) {
  VecX analytic(x.size());
  f(x, &analytic);
  double worst = 0.0;
  VecX xp = x, xm = x;
  for (int i = 0; i < x.size(); ++i) {
    xp(i) = x(i) + step;
    xm(i) = x(i) - step;
    const double fd = (f(xp, nullptr) - f(xm, nullptr)) / (2.0 * step);
    xp(i) = x(i);
    xm(i) = x(i);
    const double scale = std::max({1.0, std::abs(analytic(i)), std::abs(fd)});
    worst = std::max(worst, std::abs(analytic(i) - fd) / scale);
  }
  return worst;
}

}  // namespace guidesim
