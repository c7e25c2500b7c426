#include "safenum/agents.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace safenum {

double ShiftedLogUtility::value(double x) const {
  return spec_.theta * std::log(x + spec_.shift);
}

double best_response(const Utility& utility, double price) {
  if (!(price >= 0.0)) throw std::invalid_argument("negative price");
  if (price == 0.0) {
    if (std::isinf(utility.upper()))
      throw UnboundedSubproblemError("zero price on an unbounded domain");
    return utility.upper();
  }
  // Price at or above the marginal utility at the lower bound: the lower
  // bound is optimal (ties included).
  if (price >= utility.derivative(utility.lower())) return utility.lower();
  if (!std::isinf(utility.upper()) && price <= utility.derivative(utility.upper()))
    return utility.upper();
  return std::clamp(utility.inverse_derivative(price), utility.lower(), utility.upper());
}

double best_response(const UtilitySpec& utility, double price) {
  return best_response(ShiftedLogUtility(utility), price);
}

Vector prices_from_duals(const NumProblem& problem, const Vector& lambda) {
  if (lambda.size() != problem.m)
    throw std::invalid_argument("dual vector has length " + std::to_string(lambda.size()) +
                                ", expected " + std::to_string(problem.m));
  return problem.apply_transpose(lambda);
}

Vector best_response_profile(const NumProblem& problem, const Vector& lambda) {
  const Vector prices = prices_from_duals(problem, lambda);
  Vector x(problem.n);
  for (int i = 0; i < problem.n; ++i) x[i] = best_response(problem.utilities[i], prices[i]);
  return x;
}

bool prices_bounded(const NumProblem& problem, const Vector& lambda) {
  const Vector p = prices_from_duals(problem, lambda);
  for (int i = 0; i < problem.n; ++i)
    if (p[i] <= 0.0 && std::isinf(problem.utilities[i].upper)) return false;
  return true;
}

}  // namespace safenum
