#include "safenum/metrics.hpp"

namespace safenum {

std::vector<double> regret_series(const std::vector<double>& objectives, double f_star) {
  std::vector<double> out;
  out.reserve(objectives.size());
  double total = 0.0;
  for (double f : objectives) {
    total += f_star - f;
    out.push_back(total);
  }
  return out;
}

double infeasibility_norm(const NumProblem& problem, const Vector& x) {
  return (problem.apply(x) - problem.capacities).cwiseMax(0.0).norm();
}

double min_slack(const NumProblem& problem, const Vector& x) {
  return problem.slack(x).minCoeff();
}

}  // namespace safenum
