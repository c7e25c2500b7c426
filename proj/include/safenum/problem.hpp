#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace safenum {

using Vector = Eigen::VectorXd;
using IntVector = Eigen::Matrix<std::int64_t, Eigen::Dynamic, 1>;
using BinaryMatrix = Eigen::Matrix<std::int32_t, Eigen::Dynamic, Eigen::Dynamic>;
using Matrix = Eigen::MatrixXd;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Shifted-log utility f(x) = theta * log(x + shift) on [lower, upper].
struct UtilitySpec {
  double theta = 1.0;
  double shift = 0.1;
  double lower = 0.0;
  double upper = kInf;

  bool operator==(const UtilitySpec&) const = default;
};

// Network utility maximization instance:
//   maximize sum_i f_i(x_i)  subject to  A x <= c,  x_i in [lower_i, upper_i].
struct NumProblem {
  int n = 0;
  int m = 0;
  BinaryMatrix a;            // m x n, entries in {0, 1}
  Vector capacities;         // length m
  std::vector<UtilitySpec> utilities;  // length n
  std::uint64_t seed = 0;    // generator seed, informational only

  Vector apply(const Vector& x) const;             // A x
  Vector apply_transpose(const Vector& y) const;   // A^T y
  Vector slack(const Vector& x) const;             // c - A x
  double objective(const Vector& x) const;         // sum_i f_i(x_i)
  double max_capacity() const { return capacities.maxCoeff(); }

  bool operator==(const NumProblem& other) const;
};

// Quantities every algorithm needs, derived once per instance.
struct ProblemConstants {
  double mu = 0.0;               // min curvature of f_i over [lower_i, c_max]
  double spectral = 0.0;         // rho(A^T A)
  double dual_smoothness = 0.0;  // spectral / mu
  double lambda_bar = 0.0;       // max_i f_i'(lower_i)
  IntVector row_weights;         // A A^T e_m
};

template <typename T>
struct Interval {
  T lo;
  T hi;
};

struct GeneratorConfig {
  Interval<int> n_range{10, 40};
  Interval<int> m_range{5, 25};
  Interval<double> theta_range{10.0, 30.0};
  double capacity_value = 1.0;
  double bernoulli_p = 0.5;
  std::uint64_t seed = 0;
};

class GeneratorError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NonConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Names reported by validate().
namespace violation {
inline constexpr const char* kDimensions = "dimension mismatch";
inline constexpr const char* kNonBinary = "non-binary entry";
inline constexpr const char* kZeroRow = "zero row";
inline constexpr const char* kZeroColumn = "zero column";
inline constexpr const char* kCapacity = "non-positive capacity";
inline constexpr const char* kUtility = "invalid utility";
inline constexpr const char* kSlater = "no slater point";
}  // namespace violation

// Every violated structural assumption, by name. Empty when the instance is valid.
std::vector<std::string> validate(const NumProblem& problem);

// Random instance: n, m uniform on their ranges, A entrywise Bernoulli
// (whole matrix redrawn while any row or column is zero), theta uniform,
// c_j = capacity_value, X_i = [0, inf), shift 0.1. Pure function of config.
NumProblem generate_random(const GeneratorConfig& config);

// Largest eigenvalue of a symmetric PSD matrix, by power iteration from the
// all-ones vector, to relative tolerance 1e-10.
double spectral_radius(const Matrix& gram);

ProblemConstants compute_constants(const NumProblem& problem);

// Tiny reference instance: n=2, m=1, A=[[1,1]], c=[1], theta=1, X=[0,inf).
NumProblem tiny_problem();

}  // namespace safenum
