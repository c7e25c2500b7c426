#include "safenum/baselines.hpp"

#include <stdexcept>

#include "safenum/agents.hpp"

namespace safenum {

namespace {

constexpr int kMaxStepHalvings = 60;

}  // namespace

Vector dgm_step(const Vector& lambda, const Vector& x, const NumProblem& problem, double step) {
  return (lambda + step * (problem.apply(x) - problem.capacities)).cwiseMax(0.0);
}

Vector scaled_dual_step(const Vector& lambda, const Vector& x, const NumProblem& problem,
                        const Vector& scaling) {
  return (lambda + scaling.cwiseProduct(problem.apply(x) - problem.capacities)).cwiseMax(0.0);
}

double ndgm_default_step(const NumProblem& problem) {
  return 1.0 / problem.a.colwise().sum().maxCoeff();
}

Vector ndgm_scaling(const NumProblem& problem, const Vector& x, double epsilon_reg) {
  Vector inverse_curvature(problem.n);
  for (int i = 0; i < problem.n; ++i)
    inverse_curvature[i] = 1.0 / ShiftedLogUtility(problem.utilities[i]).curvature(x[i]);
  const Vector h = problem.apply(inverse_curvature);
  return h.cwiseMax(epsilon_reg).cwiseInverse();
}

Vector dgm_trial(const NumProblem& problem, const ProblemConstants& constants,
                 const BaselineParams& params, const IterateSink& sink) {
  const double step = params.step > 0.0 ? params.step : 1.0 / constants.dual_smoothness;
  Vector lambda = Vector::Constant(problem.m, constants.lambda_bar);
  for (int t = 1; t <= params.horizon; ++t) {
    const Vector x = best_response_profile(problem, lambda);
    if (sink) sink(Iterate{t, lambda, x});
    lambda = dgm_step(lambda, x, problem, step);
  }
  return lambda;
}

Vector fdgm_trial(const NumProblem& problem, const ProblemConstants& constants,
                  const BaselineParams& params, const IterateSink& sink) {
  const double step = 1.0 / constants.dual_smoothness;
  Vector lambda = Vector::Constant(problem.m, constants.lambda_bar);
  Vector y = lambda;
  for (int t = 1; t <= params.horizon; ++t) {
    const Vector x = best_response_profile(problem, y);
    if (sink) sink(Iterate{t, y, x});
    double trial_step = step;
    Vector next = dgm_step(y, x, problem, trial_step);
    for (int h = 0; h < kMaxStepHalvings && !prices_bounded(problem, next); ++h) {
      trial_step *= 0.5;
      next = dgm_step(y, x, problem, trial_step);
    }
    const double momentum = static_cast<double>(t - 1) / static_cast<double>(t + 2);
    // Posted duals must stay non-negative, so the extrapolation is projected.
    // A projected point that leaves some user without a positive price is
    // replaced by the plain gradient point for that round.
    y = (next + momentum * (next - lambda)).cwiseMax(0.0);
    if (!prices_bounded(problem, y)) y = next;
    lambda = std::move(next);
  }
  return lambda;
}

Vector ndgm_trial(const NumProblem& problem, const ProblemConstants& constants,
                  const BaselineParams& params, const IterateSink& sink) {
  if (!(params.epsilon_reg > 0.0)) throw std::invalid_argument("epsilon_reg must be positive");
  const double step = params.step > 0.0 ? params.step : ndgm_default_step(problem);
  Vector lambda = Vector::Constant(problem.m, constants.lambda_bar);
  for (int t = 1; t <= params.horizon; ++t) {
    const Vector x = best_response_profile(problem, lambda);
    if (sink) sink(Iterate{t, lambda, x});
    const Vector scaling = ndgm_scaling(problem, x, params.epsilon_reg);
    // Far from the optimum the scaled step can zero every dual a user sees;
    // such steps are halved until all prices stay positive.
    double factor = step;
    Vector next = scaled_dual_step(lambda, x, problem, factor * scaling);
    for (int h = 0; h < kMaxStepHalvings && !prices_bounded(problem, next); ++h) {
      factor *= 0.5;
      next = scaled_dual_step(lambda, x, problem, factor * scaling);
    }
    lambda = std::move(next);
  }
  return lambda;
}

Vector run_baseline(const NumProblem& problem, const ProblemConstants& constants,
                    const BaselineParams& params, const IterateSink& sink) {
  switch (params.kind) {
    case BaselineKind::kDgm:
      return dgm_trial(problem, constants, params, sink);
    case BaselineKind::kFdgm:
      return fdgm_trial(problem, constants, params, sink);
    case BaselineKind::kNdgm:
      return ndgm_trial(problem, constants, params, sink);
  }
  throw std::logic_error("unknown baseline");
}

std::string_view to_string(BaselineKind kind) {
  switch (kind) {
    case BaselineKind::kDgm:
      return "DGM";
    case BaselineKind::kFdgm:
      return "FDGM";
    case BaselineKind::kNdgm:
      return "NDGM";
  }
  return "?";
}

}  // namespace safenum
