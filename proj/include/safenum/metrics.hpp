#pragma once

#include <vector>

#include "safenum/problem.hpp"

namespace safenum {

// Prefix sums of f_star - f(x^t).
std::vector<double> regret_series(const std::vector<double>& objectives, double f_star);

// || [A x - c]_+ ||_2
double infeasibility_norm(const NumProblem& problem, const Vector& x);

// min_j (c - A x)_j
double min_slack(const NumProblem& problem, const Vector& x);

}  // namespace safenum
