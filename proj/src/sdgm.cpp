#include "safenum/sdgm.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "safenum/agents.hpp"

namespace safenum {

SdgmParams SdgmParams::from_constants(const ProblemConstants& constants, double gamma,
                                      int horizon) {
  if (!(gamma > 0.0)) throw std::invalid_argument("gamma must be positive");
  SdgmParams p;
  p.gamma = gamma;
  p.horizon = horizon;
  p.lambda_bar = constants.lambda_bar;
  p.margin_scale = constants.row_weights.cast<double>() / constants.mu;
  return p;
}

StepSizes step_sizes(const SdgmParams& params, int t, int m) {
  StepSizes s;
  s.minus = params.gamma / std::sqrt(static_cast<double>(t));
  s.plus = static_cast<double>(m - 1) * s.minus;
  return s;
}

Vector safety_margin(const SdgmParams& params, int t) {
  const double minus = params.gamma / std::sqrt(static_cast<double>(t));
  return params.margin_scale * minus;
}

DualState dual_step(const DualState& state, const Vector& x, const NumProblem& problem,
                    const SdgmParams& params) {
  const StepSizes steps = step_sizes(params, state.t, problem.m);
  const Vector shifted = problem.apply(x) + safety_margin(params, state.t) - problem.capacities;
  DualState next{state.lambda, state.t + 1};
  for (int j = 0; j < problem.m; ++j) {
    if (shifted[j] < 0.0)
      next.lambda[j] = std::max(0.0, state.lambda[j] - steps.minus);
    else
      next.lambda[j] = std::min(params.lambda_bar, state.lambda[j] + steps.plus);
  }
  return next;
}

double regret_constant(const ProblemConstants& constants, const NumProblem& problem) {
  const double c_l1 = problem.capacities.lpNorm<1>();
  const double m = problem.m;
  const Vector column_counts = problem.a.cast<double>().colwise().sum().transpose();
  const double col_sq = column_counts.squaredNorm();
  return c_l1 + constants.lambda_bar * m *
                    (col_sq + constants.spectral * (m - 1) * (m - 1) / constants.mu) /
                    constants.mu;
}

double default_gamma(const ProblemConstants& constants, const NumProblem& problem) {
  const double c_l1 = problem.capacities.lpNorm<1>();
  const double big_c = regret_constant(constants, problem);
  return std::sqrt(constants.lambda_bar * constants.lambda_bar * c_l1 / (2.0 * big_c));
}

double regret_bound(const ProblemConstants& constants, const NumProblem& problem,
                    double gamma, int horizon) {
  const double c_l1 = problem.capacities.lpNorm<1>();
  const double root_t = std::sqrt(static_cast<double>(horizon));
  return constants.lambda_bar * constants.lambda_bar * c_l1 * root_t / gamma +
         2.0 * regret_constant(constants, problem) * gamma * root_t;
}

DualState run_sdgm(const NumProblem& problem, const SdgmParams& params,
                   const IterateSink& sink) {
  DualState state{Vector::Constant(problem.m, params.lambda_bar), 1};
  for (int t = 1; t <= params.horizon; ++t) {
    const Vector x = best_response_profile(problem, state.lambda);
    if (sink) sink(Iterate{t, state.lambda, x});
    state = dual_step(state, x, problem, params);
  }
  return state;
}

IterateHistory run_trial(const NumProblem& problem, const SdgmParams& params) {
  IterateHistory history;
  run_sdgm(problem, params, history.sink());
  return history;
}

}  // namespace safenum
