#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "safenum/oracle.hpp"
#include "safenum/problem.hpp"

namespace safenum {

enum class Algorithm { kSdgm, kDgm, kFdgm, kNdgm };

inline constexpr Algorithm kAllAlgorithms[] = {Algorithm::kSdgm, Algorithm::kDgm,
                                               Algorithm::kFdgm, Algorithm::kNdgm};

std::string_view to_string(Algorithm algorithm);
Algorithm parse_algorithm(std::string_view name);  // case-insensitive; throws on unknown

struct TraceRow {
  int t = 0;
  double objective = 0.0;
  double regret_cum = 0.0;
  double infeasibility = 0.0;
  double distance_to_opt = 0.0;
  double max_lambda = 0.0;
  double min_slack = 0.0;
};

struct TrialTrace {
  int trial_id = 0;
  Algorithm algorithm = Algorithm::kSdgm;
  std::vector<TraceRow> rows;
};

// Knobs shared by every algorithm run.
struct RunOptions {
  int horizon = 1000;
  std::optional<double> gamma;  // SDGM; default_gamma when unset
  double dgm_step = 0.0;        // 0 selects 1/L
  double ndgm_step = 0.0;       // 0 selects ndgm_default_step
  double epsilon_reg = 1e-6;
};

// Runs one algorithm on one instance and turns each round into a TraceRow
// against the reference optimum.
TrialTrace run_algorithm(const NumProblem& problem, const ProblemConstants& constants,
                         const OptimalSolution& optimum, Algorithm algorithm,
                         const RunOptions& options, int trial_id = 0);

// The gamma SDGM actually uses under these options.
double sdgm_gamma(const NumProblem& problem, const ProblemConstants& constants,
                  const RunOptions& options);

struct ExperimentConfig {
  GeneratorConfig generator;  // seed is replaced per trial
  int horizon = 1000;
  int trials = 100;
  std::vector<Algorithm> algorithms{std::begin(kAllAlgorithms), std::end(kAllAlgorithms)};
  std::uint64_t master_seed = 0;
  std::filesystem::path output_dir;  // empty: nothing written
  int workers = 1;
  std::optional<double> gamma;
  double oracle_tolerance = 1e-8;
};

// Per-trial generator seed; a pure function of (master_seed, trial index).
std::uint64_t trial_seed(std::uint64_t master_seed, int trial_index);

struct MetricSummary {
  double mean = 0.0;
  double stddev = 0.0;
};

inline constexpr int kMetricCount = 6;
inline constexpr std::string_view kMetricNames[kMetricCount] = {
    "objective", "regret_cum", "infeasibility", "distance_to_opt", "max_lambda", "min_slack"};

struct SummaryRow {
  Algorithm algorithm = Algorithm::kSdgm;
  int t = 0;
  int count = 0;
  MetricSummary metrics[kMetricCount];
};

struct SummaryStats {
  std::vector<SummaryRow> rows;  // ordered by (algorithm, t)
  std::vector<double> sdgm_final_normalized_regret;  // R(T)/sqrt(T) per trial
};

struct TrialResult {
  int trial_id = 0;
  std::uint64_t seed = 0;
  NumProblem problem;
  ProblemConstants constants;
  OptimalSolution optimum;
  double gamma = 0.0;
  double regret_bound = 0.0;  // at T = horizon
  std::vector<TrialTrace> traces;
};

struct ExperimentResult {
  std::vector<TrialResult> trials;
  SummaryStats summary;
};

class TrialError : public std::runtime_error {
 public:
  TrialError(int trial_id, std::uint64_t seed, const std::string& what);
  int trial_id() const { return trial_id_; }
  std::uint64_t seed() const { return seed_; }

 private:
  int trial_id_;
  std::uint64_t seed_;
};

TrialResult run_single_trial(const ExperimentConfig& config, int trial_id);

// Runs every trial (concurrently up to config.workers), aggregates, and when
// output_dir is set writes one trace CSV per (trial, algorithm), trials.csv
// and summary.csv. Output is independent of the worker count.
ExperimentResult run_experiment(const ExperimentConfig& config);

SummaryStats summarize(const std::vector<TrialTrace>& traces);

// CSV surface.
inline constexpr std::string_view kTraceHeader =
    "trial_id,algorithm,t,objective,regret_cum,infeasibility,distance_to_opt,max_lambda,"
    "min_slack";

std::string format_trace_csv(const TrialTrace& trace, bool with_header = true);
std::string format_summary_csv(const SummaryStats& summary);
std::vector<TrialTrace> parse_trace_csv(std::string_view text);
std::string trace_file_name(int trial_id, Algorithm algorithm);

// Reads every trace_*.csv under dir (sorted by name) and aggregates them.
SummaryStats summarize_directory(const std::filesystem::path& dir);

}  // namespace safenum
