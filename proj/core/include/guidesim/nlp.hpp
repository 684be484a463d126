#ifndef GUIDESIM_NLP_HPP
#define GUIDESIM_NLP_HPP

#include <Eigen/Dense>

#include <functional>
#include <stdexcept>
#include <vector>

namespace guidesim {

using VecX = Eigen::VectorXd;
using MatX = Eigen::MatrixXd;

/// Smooth inequality-constrained minimization problem
///   min f(x)  s.t.  g(x) <= 0 componentwise,  lower <= x <= upper.
/// objective fills *grad when non-null; constraints fills *jac (m x n,
/// row i = dg_i/dx) when non-null. Gradients are analytic; the solver
/// never differences.
struct NlpProblem {
  int dimension = 0;
  int num_constraints = 0;
  std::function<double(const VecX& x, VecX* grad)> objective;
  std::function<void(const VecX& x, VecX& g, MatX* jac)> constraints;
  VecX lower;   // may contain -inf
  VecX upper;   // may contain +inf
  VecX initial;
};

struct NlpOptions {
  double tol_stationarity = 1e-6;
  double tol_feasibility = 1e-6;
  int max_outer = 30;
  int max_inner = 200;
  double penalty_initial = 10.0;
  double penalty_growth = 5.0;
  int lbfgs_memory = 10;
  // When set, receives the accepted augmented-Lagrangian merit values of
  // each outer iteration's inner minimization (diagnostics only).
  std::vector<std::vector<double>>* merit_history = nullptr;
};

struct NlpSolution {
  VecX point;
  double objective = 0.0;
  double max_violation = 0.0;   // max_i max(0, g_i(point))
  int outer_iterations = 0;
  int inner_iterations = 0;
  bool converged = false;
};

/// Raised when the objective or a constraint evaluates non-finite during
/// the search; carries the offending point.
class NumericFailure : public std::runtime_error {
 public:
  NumericFailure(const std::string& what, VecX point)
      : std::runtime_error(what), point_(std::move(point)) {}
  const VecX& point() const { return point_; }

 private:
  VecX point_;
};

/// Augmented-Lagrangian outer loop around a box-projected L-BFGS inner
/// minimizer. Deterministic: identical problems produce identical iterate
/// sequences.
NlpSolution minimize(const NlpProblem& problem, const NlpOptions& options = {});

/// Max componentwise relative error between the analytic gradient of f and
/// central finite differences with the given step.
double gradient_check(const std::function<double(const VecX&, VecX*)>& f, const VecX& x,
                      double step = 1e-6);

}  // namespace guidesim

#endif  // GUIDESIM_NLP_HPP
