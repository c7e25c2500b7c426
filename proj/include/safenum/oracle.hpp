#pragma once

#include "safenum/problem.hpp"

namespace safenum {

struct OptimalSolution {
  Vector x_star;
  double f_star = 0.0;
  Vector lambda_star;
  double kkt_residual = 0.0;
  int iterations_used = 0;
};

// q(lambda) = sum_i [f_i(x_i(lambda)) - p_i x_i(lambda)] + lambda^T c.
double dual_value(const NumProblem& problem, const Vector& lambda);

// grad q(lambda) = c - A x(lambda).
Vector dual_gradient(const NumProblem& problem, const Vector& lambda);

// Max of primal infeasibility, dual infeasibility, projected stationarity of
// each user's Lagrangian term, and complementary slackness.
double kkt_residual(const NumProblem& problem, const Vector& x, const Vector& lambda);

// Minimizes q over lambda >= 0 with accelerated projected gradient (step 1/L,
// gradient-based momentum restart) until successive duals differ by at most
// tolerance * 1e-2 in the max-norm and the KKT residual is at most tolerance.
// Throws NonConvergenceError after 1e6 iterations.
OptimalSolution solve_optimal(const NumProblem& problem, double tolerance = 1e-8);

}  // namespace safenum
