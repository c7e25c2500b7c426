#include "safenum/problem.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace safenum {

namespace {

constexpr double kSlaterOffset = 1e-6;
constexpr int kMaxResample = 10000;
constexpr int kMaxPowerSteps = 100000;
constexpr double kPowerTolerance = 1e-10;

}  // namespace

Vector NumProblem::apply(const Vector& x) const { return a.cast<double>() * x; }

Vector NumProblem::apply_transpose(const Vector& y) const {
  return a.cast<double>().transpose() * y;
}

Vector NumProblem::slack(const Vector& x) const { return capacities - apply(x); }

double NumProblem::objective(const Vector& x) const {
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    const auto& u = utilities[i];
    total += u.theta * std::log(x[i] + u.shift);
  }
  return total;
}

bool NumProblem::operator==(const NumProblem& other) const {
  return n == other.n && m == other.m && a == other.a &&
         capacities == other.capacities && utilities == other.utilities &&
         seed == other.seed;
}

std::vector<std::string> validate(const NumProblem& problem) {
  std::vector<std::string> out;
  const int n = problem.n;
  const int m = problem.m;
  if (n <= 0 || m <= 0 || problem.a.rows() != m || problem.a.cols() != n ||
      problem.capacities.size() != m ||
      static_cast<int>(problem.utilities.size()) != n) {
    out.emplace_back(violation::kDimensions);
    return out;
  }

  bool non_binary = false;
  for (int j = 0; j < m; ++j)
    for (int i = 0; i < n; ++i)
      if (problem.a(j, i) != 0 && problem.a(j, i) != 1) non_binary = true;
  if (non_binary) out.emplace_back(violation::kNonBinary);

  // Row/column emptiness is judged on nonzero entries so a non-binary
  // matrix still gets a meaningful report.
  const BinaryMatrix nz = (problem.a.array() != 0).cast<std::int32_t>();
  if ((nz.rowwise().sum().array() == 0).any()) out.emplace_back(violation::kZeroRow);
  if ((nz.colwise().sum().array() == 0).any()) out.emplace_back(violation::kZeroColumn);

  if (!(problem.capacities.array() > 0.0).all()) out.emplace_back(violation::kCapacity);

  bool bad_utility = false;
  for (const auto& u : problem.utilities) {
    if (!(u.theta > 0.0) || !(u.shift > 0.0) || !(u.lower >= 0.0) || !(u.lower < u.upper) ||
        !std::isfinite(u.theta) || !std::isfinite(u.shift) || !std::isfinite(u.lower))
      bad_utility = true;
  }
  if (bad_utility) out.emplace_back(violation::kUtility);

  // Slater: x~_i = lower_i + eps must sit inside the box and satisfy A x~ < c.
  if (!bad_utility && !non_binary) {
    Vector probe(n);
    bool interior = true;
    for (int i = 0; i < n; ++i) {
      probe[i] = problem.utilities[i].lower + kSlaterOffset;
      if (!(probe[i] < problem.utilities[i].upper)) interior = false;
    }
    if (!interior || !(problem.apply(probe).array() < problem.capacities.array()).all())
      out.emplace_back(violation::kSlater);
  }
  return out;
}

NumProblem generate_random(const GeneratorConfig& config) {
  if (config.n_range.lo < 1 || config.n_range.lo > config.n_range.hi ||
      config.m_range.lo < 1 || config.m_range.lo > config.m_range.hi ||
      !(config.theta_range.lo > 0.0) || config.theta_range.lo > config.theta_range.hi ||
      !(config.capacity_value > 0.0) || !(config.bernoulli_p > 0.0) ||
      !(config.bernoulli_p < 1.0))
    throw GeneratorError("invalid generator config");

  std::mt19937_64 rng(config.seed);
  std::uniform_int_distribution<int> n_dist(config.n_range.lo, config.n_range.hi);
  std::uniform_int_distribution<int> m_dist(config.m_range.lo, config.m_range.hi);
  NumProblem p;
  p.n = n_dist(rng);
  p.m = m_dist(rng);
  p.seed = config.seed;

  std::bernoulli_distribution entry(config.bernoulli_p);
  p.a.resize(p.m, p.n);
  bool accepted = false;
  for (int attempt = 0; attempt < kMaxResample && !accepted; ++attempt) {
    for (int j = 0; j < p.m; ++j)
      for (int i = 0; i < p.n; ++i) p.a(j, i) = entry(rng) ? 1 : 0;
    accepted = (p.a.rowwise().sum().array() > 0).all() &&
               (p.a.colwise().sum().array() > 0).all();
  }
  if (!accepted)
    throw GeneratorError("no matrix without zero rows/columns after " +
                         std::to_string(kMaxResample) + " draws");

  std::uniform_real_distribution<double> theta_dist(config.theta_range.lo,
                                                    config.theta_range.hi);
  p.utilities.resize(p.n);
  for (auto& u : p.utilities) {
    u.theta = theta_dist(rng);
    u.shift = 0.1;
    u.lower = 0.0;
    u.upper = kInf;
  }
  p.capacities = Vector::Constant(p.m, config.capacity_value);
  return p;
}

double spectral_radius(const Matrix& gram) {
  const auto k = gram.rows();
  if (k == 0 || gram.isZero(0.0)) return 0.0;
  Vector v = Vector::Ones(k).normalized();
  for (int step = 0; step < kMaxPowerSteps; ++step) {
    const Vector w = gram * v;
    const double rayleigh = v.dot(w);
    const double residual = (w - rayleigh * v).norm();
    if (residual <= kPowerTolerance * std::abs(rayleigh)) return rayleigh;
    const double norm = w.norm();
    if (norm == 0.0) return 0.0;
    v = w / norm;
  }
  throw NonConvergenceError("power iteration did not converge");
}

ProblemConstants compute_constants(const NumProblem& problem) {
  ProblemConstants k;
  const double c_max = problem.max_capacity();
  k.mu = kInf;
  k.lambda_bar = 0.0;
  for (const auto& u : problem.utilities) {
    k.mu = std::min(k.mu, u.theta / ((c_max + u.shift) * (c_max + u.shift)));
    k.lambda_bar = std::max(k.lambda_bar, u.theta / (u.lower + u.shift));
  }
  const Matrix a = problem.a.cast<double>();
  k.spectral = spectral_radius(a.transpose() * a);
  k.dual_smoothness = k.spectral / k.mu;

  const IntVector ones = IntVector::Ones(problem.m);
  const Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic> a_int =
      problem.a.cast<std::int64_t>();
  k.row_weights = a_int * (a_int.transpose() * ones);
  return k;
}

NumProblem tiny_problem() {
  NumProblem p;
  p.n = 2;
  p.m = 1;
  p.a.resize(1, 2);
  p.a << 1, 1;
  p.capacities = Vector::Ones(1);
  p.utilities = {UtilitySpec{1.0, 0.1, 0.0, kInf}, UtilitySpec{1.0, 0.1, 0.0, kInf}};
  return p;
}

}  // namespace safenum
