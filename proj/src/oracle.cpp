#include "safenum/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "safenum/agents.hpp"

namespace safenum {

namespace {

constexpr int kMaxIterations = 1000000;
constexpr int kMaxStepHalvings = 60;

}  // namespace

double dual_value(const NumProblem& problem, const Vector& lambda) {
  const Vector p = prices_from_duals(problem, lambda);
  double q = lambda.dot(problem.capacities);
  for (int i = 0; i < problem.n; ++i) {
    const ShiftedLogUtility u(problem.utilities[i]);
    const double xi = best_response(u, p[i]);
    q += u.value(xi) - p[i] * xi;
  }
  return q;
}

Vector dual_gradient(const NumProblem& problem, const Vector& lambda) {
  return problem.slack(best_response_profile(problem, lambda));
}

double kkt_residual(const NumProblem& problem, const Vector& x, const Vector& lambda) {
  const Vector ax_minus_c = problem.apply(x) - problem.capacities;
  double residual = std::max(0.0, ax_minus_c.maxCoeff());
  residual = std::max(residual, (-lambda).cwiseMax(0.0).maxCoeff());
  const Vector p = problem.apply_transpose(lambda);
  for (int i = 0; i < problem.n; ++i) {
    const ShiftedLogUtility u(problem.utilities[i]);
    const double g = u.derivative(x[i]) - p[i];
    double stationarity = std::abs(g);
    if (x[i] <= u.lower()) stationarity = std::max(0.0, g);
    else if (x[i] >= u.upper()) stationarity = std::max(0.0, -g);
    residual = std::max(residual, stationarity);
  }
  residual = std::max(residual, lambda.cwiseProduct(ax_minus_c).cwiseAbs().maxCoeff());
  return residual;
}

OptimalSolution solve_optimal(const NumProblem& problem, double tolerance) {
  const ProblemConstants constants = compute_constants(problem);
  const double step = 1.0 / constants.dual_smoothness;

  Vector lambda = Vector::Constant(problem.m, constants.lambda_bar);
  Vector y = lambda;
  double momentum_t = 1.0;
  double best_residual = kInf;

  for (int k = 1; k <= kMaxIterations; ++k) {
    Vector grad = dual_gradient(problem, y);
    Vector next = (y - step * grad).cwiseMax(0.0);
    // Outside dom q the projected step is shortened until every price is
    // positive again.
    double trial_step = step;
    for (int h = 0; h < kMaxStepHalvings && !prices_bounded(problem, next); ++h) {
      trial_step *= 0.5;
      next = (y - trial_step * grad).cwiseMax(0.0);
    }

    const Vector x_next = best_response_profile(problem, next);
    const double residual = kkt_residual(problem, x_next, next);
    best_residual = std::min(best_residual, residual);
    const double move = (next - lambda).lpNorm<Eigen::Infinity>();
    if (move <= tolerance * 1e-2 && residual <= tolerance) {
      OptimalSolution sol;
      sol.lambda_star = next;
      sol.x_star = x_next;
      sol.f_star = problem.objective(x_next);
      sol.kkt_residual = residual;
      sol.iterations_used = k;
      return sol;
    }

    const bool restart = (y - next).dot(next - lambda) > 0.0;
    if (restart) {
      momentum_t = 1.0;
      y = next;
    } else {
      const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * momentum_t * momentum_t));
      y = next + ((momentum_t - 1.0) / t_next) * (next - lambda);
      momentum_t = t_next;
      y = y.cwiseMax(0.0);
      if (!prices_bounded(problem, y)) {
        momentum_t = 1.0;
        y = next;
      }
    }
    lambda = std::move(next);
  }
  std::ostringstream msg;
  msg << "oracle did not converge in " << kMaxIterations
      << " iterations; best kkt residual " << best_residual;
  throw NonConvergenceError(msg.str());
}

}  // namespace safenum
