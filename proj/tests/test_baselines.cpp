#include <doctest.h>

#include <random>

#include "safenum/agents.hpp"
#include "safenum/baselines.hpp"
#include "safenum/oracle.hpp"

using namespace safenum;

namespace {

BaselineParams params(BaselineKind kind, int horizon, double step = 0.0) {
  BaselineParams p;
  p.kind = kind;
  p.horizon = horizon;
  p.step = step;
  return p;
}

double final_dual_error(const NumProblem& prob, const ProblemConstants& k, BaselineKind kind,
                        int horizon, const Vector& lambda_star) {
  IterateHistory h;
  run_baseline(prob, k, params(kind, horizon), h.sink());
  return (h.lambda.back() - lambda_star).cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("dgm_step examples") {
  const NumProblem tiny = tiny_problem();
  // A x - c = 2 * 0.4 - 1 = -0.2
  const Vector next = dgm_step(Vector::Constant(1, 2.0), Vector::Constant(2, 0.4), tiny, 1.0);
  CHECK(next[0] == doctest::Approx(1.8).epsilon(1e-15));
  // Projection at zero.
  CHECK(dgm_step(Vector::Constant(1, 0.1), Vector::Zero(2), tiny, 1.0)[0] == 0.0);
  // Overloaded link raises the price.
  CHECK(dgm_step(Vector::Constant(1, 1.0), Vector::Constant(2, 1.0), tiny, 0.5)[0] == 1.5);
}

TEST_CASE("scaled_dual_step with uniform scaling equals dgm_step") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 2.0);
  for (int trial = 0; trial < 50; ++trial) {
    const NumProblem prob = generate_random(GeneratorConfig{.seed = rng()});
    Vector lambda(prob.m), x(prob.n);
    for (int j = 0; j < prob.m; ++j) lambda[j] = u(rng);
    for (int i = 0; i < prob.n; ++i) x[i] = u(rng);
    const double step = u(rng);
    CHECK((scaled_dual_step(lambda, x, prob, Vector::Constant(prob.m, step)) -
           dgm_step(lambda, x, prob, step))
              .cwiseAbs()
              .maxCoeff() == 0.0);
  }
}

TEST_CASE("ndgm_scaling") {
  const NumProblem tiny = tiny_problem();
  // |f''(x)| = 1 / (x + 0.1)^2, so sum_i A_ji / |f_i''| = 2 * 0.6^2 at x = 0.5.
  const Vector d = ndgm_scaling(tiny, Vector::Constant(2, 0.5), 1e-6);
  CHECK(d[0] == doctest::Approx(1.0 / 0.72).epsilon(1e-14));
  CHECK(ndgm_default_step(tiny) == 1.0);

  NumProblem heavy = tiny;
  for (auto& util : heavy.utilities) util.theta = 1e12;
  // Denominator 2 * 0.01 / 1e12 falls under the floor.
  CHECK(ndgm_scaling(heavy, Vector::Zero(2), 1e-6)[0] == doctest::Approx(1e6).epsilon(1e-12));

  NumProblem two = tiny;
  two.m = 2;
  two.a = BinaryMatrix::Ones(2, 2);
  two.capacities = Vector::Ones(2);
  CHECK(ndgm_default_step(two) == 0.5);
}

TEST_CASE("DGM runs from lambda_bar with step 1/L and a fixed point at the optimum") {
  const NumProblem tiny = tiny_problem();
  const ProblemConstants k = compute_constants(tiny);
  IterateHistory h;
  dgm_trial(tiny, k, params(BaselineKind::kDgm, 3), h.sink());
  REQUIRE(h.size() == 3);
  CHECK(h.lambda[0][0] == k.lambda_bar);
  const double step = 1.0 / k.dual_smoothness;
  CHECK(h.lambda[1][0] == doctest::Approx(std::max(0.0, 10.0 - step)).epsilon(1e-14));

  const Vector star = Vector::Constant(1, 5.0 / 3.0);
  const Vector x = best_response_profile(tiny, star);
  CHECK(dgm_step(star, x, tiny, step)[0] == doctest::Approx(5.0 / 3.0).epsilon(1e-14));
}

TEST_CASE("FDGM first step equals a plain 1/L step and the optimum is a fixed point") {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    const NumProblem prob = generate_random(GeneratorConfig{.seed = rng()});
    const ProblemConstants k = compute_constants(prob);
    IterateHistory fast, plain;
    fdgm_trial(prob, k, params(BaselineKind::kFdgm, 2), fast.sink());
    dgm_trial(prob, k, params(BaselineKind::kDgm, 2), plain.sink());
    CHECK((fast.lambda[1] - plain.lambda[1]).cwiseAbs().maxCoeff() <= 1e-12);

    const OptimalSolution opt = solve_optimal(prob);
    const Vector x = best_response_profile(prob, opt.lambda_star);
    const Vector again = dgm_step(opt.lambda_star, x, prob, 1.0 / k.dual_smoothness);
    CHECK((again - opt.lambda_star).cwiseAbs().maxCoeff() <= 1e-8);
  }
}

TEST_CASE("FDGM dual value is eventually non-increasing on the tiny instance") {
  const NumProblem tiny = tiny_problem();
  const ProblemConstants k = compute_constants(tiny);
  IterateHistory h;
  fdgm_trial(tiny, k, params(BaselineKind::kFdgm, 400), h.sink());
  for (std::size_t t = 200; t < h.size(); ++t)
    CHECK(dual_value(tiny, h.lambda[t]) <= dual_value(tiny, h.lambda[t - 1]) + 1e-10);
  CHECK(h.lambda.back()[0] == doctest::Approx(5.0 / 3.0).epsilon(1e-6));
}

TEST_CASE("NDGM reaches the tiny optimum faster than DGM") {
  const NumProblem tiny = tiny_problem();
  const ProblemConstants k = compute_constants(tiny);
  const Vector star = Vector::Constant(1, 5.0 / 3.0);
  auto first_close = [&](BaselineKind kind) {
    IterateHistory h;
    run_baseline(tiny, k, params(kind, 5000), h.sink());
    for (std::size_t t = 0; t < h.size(); ++t)
      if (std::abs(h.lambda[t][0] - star[0]) <= 1e-4) return static_cast<int>(t) + 1;
    return 1 << 30;
  };
  const int ndgm = first_close(BaselineKind::kNdgm);
  const int dgm = first_close(BaselineKind::kDgm);
  CHECK(ndgm < 5000);
  CHECK(ndgm < dgm);
}

TEST_CASE("DGM averaged infeasibility shrinks with the horizon") {
  std::mt19937_64 rng(8);
  int decreasing = 0;
  const int instances = 10;
  for (int trial = 0; trial < instances; ++trial) {
    const NumProblem prob = generate_random(GeneratorConfig{.seed = rng()});
    const ProblemConstants k = compute_constants(prob);
    std::vector<double> averaged;
    for (int T : {100, 400, 1600}) {
      Vector sum_x = Vector::Zero(prob.n);
      dgm_trial(prob, k, params(BaselineKind::kDgm, T),
                [&](const Iterate& it) { sum_x += it.x; });
      const Vector violation = (prob.apply(sum_x / T) - prob.capacities).cwiseMax(0.0);
      averaged.push_back(violation.norm());
    }
    if (averaged[2] <= averaged[1] + 1e-12 && averaged[1] <= averaged[0] + 1e-12) ++decreasing;
  }
  CHECK(decreasing >= instances * 8 / 10);
}

TEST_CASE("accelerated and scaled baselines end closer to the optimum than DGM") {
  std::mt19937_64 rng(12);
  const int instances = 30;
  int fdgm_wins = 0, ndgm_wins = 0;
  for (int trial = 0; trial < instances; ++trial) {
    const NumProblem prob = generate_random(GeneratorConfig{.seed = rng()});
    const ProblemConstants k = compute_constants(prob);
    const OptimalSolution opt = solve_optimal(prob);
    const double dgm = final_dual_error(prob, k, BaselineKind::kDgm, 1000, opt.lambda_star);
    fdgm_wins += final_dual_error(prob, k, BaselineKind::kFdgm, 1000, opt.lambda_star) < dgm;
    ndgm_wins += final_dual_error(prob, k, BaselineKind::kNdgm, 1000, opt.lambda_star) < dgm;
  }
  CHECK(fdgm_wins >= instances * 9 / 10);
  CHECK(ndgm_wins >= instances * 9 / 10);
}

TEST_CASE("to_string") {
  CHECK(to_string(BaselineKind::kDgm) == "DGM");
  CHECK(to_string(BaselineKind::kFdgm) == "FDGM");
  CHECK(to_string(BaselineKind::kNdgm) == "NDGM");
}
