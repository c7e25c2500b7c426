#pragma once

#include "safenum/iterate.hpp"
#include "safenum/problem.hpp"

namespace safenum {

struct SdgmParams {
  double gamma = 0.0;
  int horizon = 0;
  double lambda_bar = 0.0;
  Vector margin_scale;  // row_weights_j / mu

  static SdgmParams from_constants(const ProblemConstants& constants, double gamma,
                                   int horizon);
};

struct DualState {
  Vector lambda;
  int t = 1;
};

struct StepSizes {
  double minus = 0.0;
  double plus = 0.0;
};

// gamma_-^t = gamma / sqrt(t); gamma_+^t = (m - 1) gamma_-^t.
StepSizes step_sizes(const SdgmParams& params, int t, int m);

// Delta^t_j = margin_scale_j * gamma_-^t.
Vector safety_margin(const SdgmParams& params, int t);

// Sign-based update. For each constraint j, with s = [A x + Delta^t - c]_j:
//   s <  0  ->  lambda_j = max(0, lambda_j - gamma_-^t)
//   s >= 0  ->  lambda_j = min(lambda_bar, lambda_j + gamma_+^t)
// Only the sign of s matters.
DualState dual_step(const DualState& state, const Vector& x, const NumProblem& problem,
                    const SdgmParams& params);

// Step size minimizing the regret bound, gamma = sqrt(lambda_bar^2 ||c||_1 / (2C)).
double default_gamma(const ProblemConstants& constants, const NumProblem& problem);

// C = ||c||_1 + lambda_bar m (||A^T e_m||^2 + rho(A^T A)(m-1)^2 / mu) / mu.
double regret_constant(const ProblemConstants& constants, const NumProblem& problem);

// lambda_bar^2 ||c||_1 sqrt(T) / gamma + 2 C gamma sqrt(T).
double regret_bound(const ProblemConstants& constants, const NumProblem& problem,
                    double gamma, int horizon);

// Runs rounds t = 1..horizon from lambda^1 = lambda_bar e_m, handing each
// (lambda^t, x^t) to sink before the dual update. Returns the state after the
// last update.
DualState run_sdgm(const NumProblem& problem, const SdgmParams& params,
                   const IterateSink& sink);

// run_sdgm with every round recorded.
IterateHistory run_trial(const NumProblem& problem, const SdgmParams& params);

}  // namespace safenum
