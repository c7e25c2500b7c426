#pragma once

#include <string_view>

#include "safenum/iterate.hpp"
#include "safenum/problem.hpp"

namespace safenum {

// Comparison methods without the feasibility guarantee.
enum class BaselineKind { kDgm, kFdgm, kNdgm };

struct BaselineParams {
  BaselineKind kind = BaselineKind::kDgm;
  double step = 0.0;  // DGM step (0: 1/L); NDGM multiplier (0: ndgm_default_step)
  int horizon = 0;
  double epsilon_reg = 1e-6;  // NDGM curvature floor
};

// lambda^+ = max(0, lambda + step (A x - c)).
Vector dgm_step(const Vector& lambda, const Vector& x, const NumProblem& problem, double step);

// lambda^+ = max(0, lambda + D (A x - c)) with diagonal D given as a vector.
Vector scaled_dual_step(const Vector& lambda, const Vector& x, const NumProblem& problem,
                        const Vector& scaling);

// NDGM diagonal: D_jj = 1 / max(eps, sum_i A_ji / |f_i''(x_i)|).
// The update uses step * D, with the step multiplier defaulting to
// ndgm_default_step().
Vector ndgm_scaling(const NumProblem& problem, const Vector& x, double epsilon_reg);

// 1 / max_i (number of constraints user i appears in). With this multiplier
// every row of step * D * (A W A^T) sums to at most 1 for W = diag(1/|f''|).
double ndgm_default_step(const NumProblem& problem);

// Classical projected dual subgradient from lambda^1 = lambda_bar e_m.
Vector dgm_trial(const NumProblem& problem, const ProblemConstants& constants,
                 const BaselineParams& params, const IterateSink& sink);

// Nesterov-accelerated projected dual gradient with step 1/L. The posted dual
// is the extrapolation point y^t, so the sink sees (y^t, x(y^t)).
Vector fdgm_trial(const NumProblem& problem, const ProblemConstants& constants,
                  const BaselineParams& params, const IterateSink& sink);

// Diagonally scaled (Newton-like) dual gradient.
Vector ndgm_trial(const NumProblem& problem, const ProblemConstants& constants,
                  const BaselineParams& params, const IterateSink& sink);

Vector run_baseline(const NumProblem& problem, const ProblemConstants& constants,
                    const BaselineParams& params, const IterateSink& sink);

std::string_view to_string(BaselineKind kind);

}  // namespace safenum
