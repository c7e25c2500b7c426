#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <mutex>
#include <optional>

#include <json.hpp>

#include "safenum/harness.hpp"
#include "safenum/oracle.hpp"
#include "safenum/problem.hpp"

namespace safenum {

using Json = nlohmann::json;

// Problem document: {n, m, A, c, theta, shift, lower, upper, seed}. Infinite
// upper bounds are written as "inf". shift is a scalar when shared by all
// users, otherwise an array.
Json problem_to_json(const NumProblem& problem);
NumProblem problem_from_json(const Json& doc);

Json solution_to_json(const OptimalSolution& solution);
OptimalSolution solution_from_json(const Json& doc);

Json config_to_json(const ExperimentConfig& config);
// Missing keys keep their defaults.
ExperimentConfig config_from_json(const Json& doc);

// FNV-1a over the canonical problem document, seed excluded.
std::uint64_t problem_hash(const NumProblem& problem);

Json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const Json& doc);

// Reference optima keyed by problem content. With a directory, solutions are
// also persisted as <hash>.json next to a copy of the problem document.
class OracleCache {
 public:
  explicit OracleCache(std::filesystem::path dir = {}, double tolerance = 1e-8)
      : dir_(std::move(dir)), tolerance_(tolerance) {}

  OptimalSolution solve(const NumProblem& problem);
  std::size_t size() const;
  int misses() const;

 private:
  std::filesystem::path dir_;
  double tolerance_;
  mutable std::mutex mutex_;
  std::map<std::uint64_t, OptimalSolution> memo_;
  int misses_ = 0;
};

}  // namespace safenum
