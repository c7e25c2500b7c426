#pragma once

#include <stdexcept>

#include "safenum/problem.hpp"

namespace safenum {

// Thrown when a user faces a price under which its utility-minus-cost has no
// maximizer (zero price on an unbounded domain).
class UnboundedSubproblemError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Strictly increasing, strongly concave utility on a box [lower, upper].
// Any family exposing these four pieces plugs into best_response().
class Utility {
 public:
  virtual ~Utility() = default;
  virtual double value(double x) const = 0;
  virtual double derivative(double x) const = 0;
  // x with f'(x) = slope, not clamped to the domain. slope > 0.
  virtual double inverse_derivative(double slope) const = 0;
  // |f''(x)|
  virtual double curvature(double x) const = 0;
  virtual double lower() const = 0;
  virtual double upper() const = 0;
};

class ShiftedLogUtility final : public Utility {
 public:
  explicit ShiftedLogUtility(const UtilitySpec& spec) : spec_(spec) {}

  double value(double x) const override;
  double derivative(double x) const override { return spec_.theta / (x + spec_.shift); }
  double inverse_derivative(double slope) const override {
    return spec_.theta / slope - spec_.shift;
  }
  double curvature(double x) const override {
    return spec_.theta / ((x + spec_.shift) * (x + spec_.shift));
  }
  double lower() const override { return spec_.lower; }
  double upper() const override { return spec_.upper; }

 private:
  UtilitySpec spec_;
};

// argmax_{x in [lower, upper]} f(x) - price * x.
double best_response(const Utility& utility, double price);
double best_response(const UtilitySpec& utility, double price);

// p = A^T lambda.
Vector prices_from_duals(const NumProblem& problem, const Vector& lambda);

// Every user's best response to the prices induced by lambda.
Vector best_response_profile(const NumProblem& problem, const Vector& lambda);

// True when every user's subproblem at these duals has a maximizer.
bool prices_bounded(const NumProblem& problem, const Vector& lambda);

}  // namespace safenum
