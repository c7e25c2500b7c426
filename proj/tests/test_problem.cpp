#include <doctest.h>

#include <algorithm>
#include <random>

#include "safenum/io.hpp"
#include "safenum/problem.hpp"
#include "support/oracles.hpp"

using namespace safenum;

namespace {

bool has(const std::vector<std::string>& v, const char* name) {
  return std::find(v.begin(), v.end(), name) != v.end();
}

}  // namespace

TEST_CASE("validate accepts the tiny instance") {
  CHECK(validate(tiny_problem()).empty());
}

TEST_CASE("validate reports structural violations by name") {
  SUBCASE("non-binary entry") {
    NumProblem p = tiny_problem();
    p.a(0, 1) = 2;
    CHECK(has(validate(p), violation::kNonBinary));
  }
  SUBCASE("zero row") {
    NumProblem p = tiny_problem();
    p.m = 2;
    p.a.resize(2, 2);
    p.a << 1, 1, 0, 0;
    p.capacities = Vector::Ones(2);
    CHECK(has(validate(p), violation::kZeroRow));
  }
  SUBCASE("zero column") {
    NumProblem p = tiny_problem();
    p.a << 1, 0;
    CHECK(has(validate(p), violation::kZeroColumn));
  }
  SUBCASE("capacity") {
    NumProblem p = tiny_problem();
    p.capacities[0] = 0.0;
    const auto v = validate(p);
    CHECK(has(v, violation::kCapacity));
    CHECK(has(v, violation::kSlater));
  }
  SUBCASE("utility") {
    NumProblem p = tiny_problem();
    p.utilities[0].theta = -1.0;
    CHECK(has(validate(p), violation::kUtility));
  }
  SUBCASE("slater fails when lower bounds already fill capacity") {
    NumProblem p = tiny_problem();
    p.utilities[0].lower = 0.5;
    p.utilities[1].lower = 0.5;
    const auto v = validate(p);
    CHECK(v.size() == 1);
    CHECK(has(v, violation::kSlater));
  }
  SUBCASE("dimensions") {
    NumProblem p = tiny_problem();
    p.capacities = Vector::Ones(3);
    CHECK(has(validate(p), violation::kDimensions));
  }
}

TEST_CASE("generate_random honours the default ranges and is deterministic") {
  GeneratorConfig g;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    g.seed = seed;
    const NumProblem p = generate_random(g);
    CHECK(p.n >= 10);
    CHECK(p.n <= 40);
    CHECK(p.m >= 5);
    CHECK(p.m <= 25);
    CHECK(validate(p).empty());
    CHECK((p.a.rowwise().sum().array() > 0).all());
    CHECK((p.a.colwise().sum().array() > 0).all());
    for (const auto& u : p.utilities) {
      CHECK(u.theta >= 10.0);
      CHECK(u.theta <= 30.0);
      CHECK(u.shift == 0.1);
      CHECK(u.lower == 0.0);
      CHECK(std::isinf(u.upper));
    }
    CHECK((p.capacities.array() == 1.0).all());
    const NumProblem again = generate_random(g);
    CHECK(again == p);
    CHECK(problem_to_json(again).dump() == problem_to_json(p).dump());
  }
}

TEST_CASE("generate_random rejects degenerate configs") {
  GeneratorConfig g;
  g.bernoulli_p = 1.0;
  CHECK_THROWS_AS(generate_random(g), GeneratorError);
  g = {};
  g.n_range = {5, 4};
  CHECK_THROWS_AS(generate_random(g), GeneratorError);
  // n = m = 30 with p tiny: every draw has zero rows; bounded resampling gives up.
  g = {};
  g.n_range = {30, 30};
  g.m_range = {30, 30};
  g.bernoulli_p = 1e-6;
  CHECK_THROWS_AS(generate_random(g), GeneratorError);
}

TEST_CASE("compute_constants on the tiny instance") {
  const ProblemConstants k = compute_constants(tiny_problem());
  CHECK(k.mu == doctest::Approx(1.0 / 1.21).epsilon(1e-14));
  CHECK(k.spectral == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(k.lambda_bar == doctest::Approx(10.0).epsilon(1e-14));
  REQUIRE(k.row_weights.size() == 1);
  CHECK(k.row_weights[0] == 2);
  CHECK(k.dual_smoothness == k.spectral / k.mu);
}

TEST_CASE("row weights for A = [[1,1],[1,0]]") {
  NumProblem p = tiny_problem();
  p.m = 2;
  p.a.resize(2, 2);
  p.a << 1, 1, 1, 0;
  p.capacities = Vector::Ones(2);
  const ProblemConstants k = compute_constants(p);
  CHECK(k.row_weights[0] == 3);
  CHECK(k.row_weights[1] == 2);
}

TEST_CASE("constants properties on random instances") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    GeneratorConfig g;
    g.n_range = {1, 8};
    g.m_range = {1, 8};
    g.seed = rng();
    const NumProblem p = generate_random(g);
    const ProblemConstants k = compute_constants(p);
    const double c_max = p.max_capacity();
    for (const auto& u : p.utilities)
      CHECK(k.mu <= u.theta / ((c_max + u.shift) * (c_max + u.shift)));
    CHECK(k.dual_smoothness * k.mu == doctest::Approx(k.spectral).epsilon(1e-15));
    // Triple loop: sum_k [A A^T]_{jk}.
    for (int j = 0; j < p.m; ++j) {
      std::int64_t direct = 0;
      for (int kk = 0; kk < p.m; ++kk)
        for (int i = 0; i < p.n; ++i) direct += p.a(j, i) * p.a(kk, i);
      CHECK(k.row_weights[j] == direct);
      CHECK(k.row_weights[j] >= 1);
    }
  }
}

TEST_CASE("spectral_radius examples") {
  CHECK(spectral_radius(Matrix::Identity(3, 3)) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(spectral_radius(Matrix::Ones(2, 2)) == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(spectral_radius(Matrix::Zero(2, 2)) == 0.0);
}

TEST_CASE("spectral_radius agrees with the characteristic-polynomial oracle") {
  std::mt19937_64 rng(5);
  SUBCASE("random 4x4 A^T A") {
    std::bernoulli_distribution bit(0.5);
    for (int trial = 0; trial < 100; ++trial) {
      const int rows = 2 + trial % 5;
      Matrix a(rows, 4);
      for (int j = 0; j < rows; ++j)
        for (int i = 0; i < 4; ++i) a(j, i) = bit(rng) ? 1.0 : 0.0;
      a(0, 0) = 1.0;
      const Matrix gram = a.transpose() * a;
      const double oracle = testing::brute_force_spectral_radius(gram);
      CHECK(std::abs(spectral_radius(gram) - oracle) <= 1e-8 * std::max(1.0, oracle));
    }
  }
  SUBCASE("random symmetric PSD up to 6x6") {
    std::normal_distribution<double> gauss;
    for (int trial = 0; trial < 200; ++trial) {
      const int k = 1 + trial % 6;
      Matrix b(k + 1, k);
      for (int r = 0; r < b.rows(); ++r)
        for (int c = 0; c < k; ++c) b(r, c) = trial % 2 ? gauss(rng) : std::abs(gauss(rng));
      const Matrix gram = b.transpose() * b;
      const double oracle = testing::brute_force_spectral_radius(gram);
      CHECK(std::abs(spectral_radius(gram) - oracle) <= 1e-8 * std::max(1.0, oracle));
    }
  }
}
