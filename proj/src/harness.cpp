#include "safenum/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <map>
#include <sstream>
#include <thread>

#include "safenum/agents.hpp"
#include "safenum/baselines.hpp"
#include "safenum/io.hpp"
#include "safenum/metrics.hpp"
#include "safenum/sdgm.hpp"

namespace safenum {

namespace {

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double parse_double(std::string_view s) {
  // strtod handles inf/nan spellings that from_chars rejects on some libstdc++.
  return std::strtod(std::string(s).c_str(), nullptr);
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(sep, start);
    out.push_back(line.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

}  // namespace

std::string_view to_string(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::kSdgm:
      return "SDGM";
    case Algorithm::kDgm:
      return "DGM";
    case Algorithm::kFdgm:
      return "FDGM";
    case Algorithm::kNdgm:
      return "NDGM";
  }
  return "?";
}

Algorithm parse_algorithm(std::string_view name) {
  std::string upper(name);
  for (char& ch : upper) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
  for (Algorithm a : kAllAlgorithms)
    if (to_string(a) == upper) return a;
  throw std::invalid_argument("unknown algorithm '" + std::string(name) + "'");
}

TrialError::TrialError(int trial_id, std::uint64_t seed, const std::string& what)
    : std::runtime_error("trial " + std::to_string(trial_id) + " (seed " +
                         std::to_string(seed) + "): " + what),
      trial_id_(trial_id),
      seed_(seed) {}

double sdgm_gamma(const NumProblem& problem, const ProblemConstants& constants,
                  const RunOptions& options) {
  return options.gamma ? *options.gamma : default_gamma(constants, problem);
}

TrialTrace run_algorithm(const NumProblem& problem, const ProblemConstants& constants,
                         const OptimalSolution& optimum, Algorithm algorithm,
                         const RunOptions& options, int trial_id) {
  TrialTrace trace;
  trace.trial_id = trial_id;
  trace.algorithm = algorithm;
  trace.rows.reserve(options.horizon);
  auto sink = [&](const Iterate& it) {
    TraceRow row;
    row.t = it.t;
    row.objective = problem.objective(it.x);
    row.infeasibility = infeasibility_norm(problem, it.x);
    row.distance_to_opt = (it.x - optimum.x_star).norm();
    row.max_lambda = it.lambda.maxCoeff();
    row.min_slack = min_slack(problem, it.x);
    trace.rows.push_back(row);
  };

  switch (algorithm) {
    case Algorithm::kSdgm: {
      const auto params = SdgmParams::from_constants(
          constants, sdgm_gamma(problem, constants, options), options.horizon);
      run_sdgm(problem, params, sink);
      break;
    }
    case Algorithm::kDgm:
    case Algorithm::kFdgm:
    case Algorithm::kNdgm: {
      BaselineParams params;
      params.kind = algorithm == Algorithm::kDgm    ? BaselineKind::kDgm
                    : algorithm == Algorithm::kFdgm ? BaselineKind::kFdgm
                                                    : BaselineKind::kNdgm;
      params.step = algorithm == Algorithm::kNdgm ? options.ndgm_step : options.dgm_step;
      params.horizon = options.horizon;
      params.epsilon_reg = options.epsilon_reg;
      run_baseline(problem, constants, params, sink);
      break;
    }
  }

  std::vector<double> objectives;
  objectives.reserve(trace.rows.size());
  for (const auto& r : trace.rows) objectives.push_back(r.objective);
  const auto regret = regret_series(objectives, optimum.f_star);
  for (std::size_t k = 0; k < trace.rows.size(); ++k) trace.rows[k].regret_cum = regret[k];
  return trace;
}

std::uint64_t trial_seed(std::uint64_t master_seed, int trial_index) {
  return splitmix64(master_seed ^ splitmix64(static_cast<std::uint64_t>(trial_index)));
}

namespace {

TrialResult run_trial_with(const ExperimentConfig& config, int trial_id, OracleCache& cache) {
  TrialResult r;
  r.trial_id = trial_id;
  r.seed = trial_seed(config.master_seed, trial_id);
  try {
    GeneratorConfig gen = config.generator;
    gen.seed = r.seed;
    r.problem = generate_random(gen);
    r.constants = compute_constants(r.problem);
    r.optimum = cache.solve(r.problem);
    RunOptions options;
    options.horizon = config.horizon;
    options.gamma = config.gamma;
    r.gamma = sdgm_gamma(r.problem, r.constants, options);
    r.regret_bound = regret_bound(r.constants, r.problem, r.gamma, config.horizon);
    for (Algorithm a : config.algorithms)
      r.traces.push_back(run_algorithm(r.problem, r.constants, r.optimum, a, options, trial_id));
  } catch (const std::exception& e) {
    throw TrialError(trial_id, r.seed, e.what());
  }
  return r;
}

std::string format_trials_csv(const std::vector<TrialResult>& trials) {
  std::ostringstream out;
  out << "trial_id,seed,n,m,f_star,kkt_residual,oracle_iterations,mu,spectral,lambda_bar,"
         "gamma,regret_bound\n";
  for (const auto& r : trials) {
    out << r.trial_id << ',' << r.seed << ',' << r.problem.n << ',' << r.problem.m << ','
        << format_double(r.optimum.f_star) << ',' << format_double(r.optimum.kkt_residual)
        << ',' << r.optimum.iterations_used << ',' << format_double(r.constants.mu) << ','
        << format_double(r.constants.spectral) << ',' << format_double(r.constants.lambda_bar)
        << ',' << format_double(r.gamma) << ',' << format_double(r.regret_bound) << '\n';
  }
  return out.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

}  // namespace

TrialResult run_single_trial(const ExperimentConfig& config, int trial_id) {
  OracleCache cache({}, config.oracle_tolerance);
  return run_trial_with(config, trial_id, cache);
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  if (config.trials < 1 || config.horizon < 1 || config.workers < 1)
    throw std::invalid_argument("trials, horizon and workers must be at least 1");

  ExperimentResult result;
  result.trials.resize(config.trials);
  std::vector<std::exception_ptr> errors(config.trials);
  OracleCache cache({}, config.oracle_tolerance);

  std::atomic<int> next{0};
  auto worker = [&] {
    for (int k = next++; k < config.trials; k = next++) {
      try {
        result.trials[k] = run_trial_with(config, k, cache);
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
  };
  const int n_threads = std::min(config.workers, config.trials);
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int w = 0; w < n_threads; ++w) pool.emplace_back(worker);
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  std::vector<TrialTrace> all;
  for (const auto& r : result.trials)
    for (const auto& tr : r.traces) all.push_back(tr);
  result.summary = summarize(all);

  if (!config.output_dir.empty()) {
    std::filesystem::create_directories(config.output_dir);
    for (const auto& tr : all)
      write_text(config.output_dir / trace_file_name(tr.trial_id, tr.algorithm),
                 format_trace_csv(tr));
    write_text(config.output_dir / "trials.csv", format_trials_csv(result.trials));
    write_text(config.output_dir / "summary.csv", format_summary_csv(result.summary));
  }
  return result;
}

SummaryStats summarize(const std::vector<TrialTrace>& traces) {
  struct Acc {
    int count = 0;
    double sum[kMetricCount] = {};
    double sum_sq[kMetricCount] = {};
  };
  std::map<std::pair<int, int>, Acc> acc;
  std::vector<std::pair<int, double>> final_regret;
  for (const auto& tr : traces) {
    for (const auto& row : tr.rows) {
      const double values[kMetricCount] = {row.objective,       row.regret_cum,
                                           row.infeasibility,   row.distance_to_opt,
                                           row.max_lambda,      row.min_slack};
      auto& a = acc[{static_cast<int>(tr.algorithm), row.t}];
      ++a.count;
      for (int k = 0; k < kMetricCount; ++k) {
        a.sum[k] += values[k];
        a.sum_sq[k] += values[k] * values[k];
      }
    }
    if (tr.algorithm == Algorithm::kSdgm && !tr.rows.empty()) {
      const auto& last = tr.rows.back();
      final_regret.emplace_back(tr.trial_id,
                                last.regret_cum / std::sqrt(static_cast<double>(last.t)));
    }
  }

  SummaryStats out;
  for (const auto& [key, a] : acc) {
    SummaryRow row;
    row.algorithm = static_cast<Algorithm>(key.first);
    row.t = key.second;
    row.count = a.count;
    for (int k = 0; k < kMetricCount; ++k) {
      const double mean = a.sum[k] / a.count;
      double var = 0.0;
      if (a.count > 1)
        var = std::max(0.0, (a.sum_sq[k] - a.count * mean * mean) / (a.count - 1));
      row.metrics[k] = {mean, std::sqrt(var)};
    }
    out.rows.push_back(row);
  }
  std::stable_sort(final_regret.begin(), final_regret.end(),
                   [](const auto& l, const auto& r) { return l.first < r.first; });
  for (const auto& [id, v] : final_regret) out.sdgm_final_normalized_regret.push_back(v);
  return out;
}

std::string format_trace_csv(const TrialTrace& trace, bool with_header) {
  std::string out;
  out.reserve(trace.rows.size() * 160);
  if (with_header) {
    out += kTraceHeader;
    out += '\n';
  }
  const std::string prefix =
      std::to_string(trace.trial_id) + ',' + std::string(to_string(trace.algorithm)) + ',';
  for (const auto& r : trace.rows) {
    out += prefix;
    out += std::to_string(r.t);
    for (double v : {r.objective, r.regret_cum, r.infeasibility, r.distance_to_opt,
                     r.max_lambda, r.min_slack}) {
      out += ',';
      out += format_double(v);
    }
    out += '\n';
  }
  return out;
}

std::string format_summary_csv(const SummaryStats& summary) {
  std::string out = "algorithm,t,count";
  for (auto name : kMetricNames) {
    out += ',';
    out += name;
    out += "_mean,";
    out += name;
    out += "_std";
  }
  out += '\n';
  for (const auto& row : summary.rows) {
    out += std::string(to_string(row.algorithm)) + ',' + std::to_string(row.t) + ',' +
           std::to_string(row.count);
    for (const auto& m : row.metrics) {
      out += ',' + format_double(m.mean);
      out += ',' + format_double(m.stddev);
    }
    out += '\n';
  }
  return out;
}

std::vector<TrialTrace> parse_trace_csv(std::string_view text) {
  std::vector<TrialTrace> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line == kTraceHeader) continue;
    const auto cells = split(line, ',');
    if (cells.size() != 9) throw std::invalid_argument("trace row must have 9 columns");
    int trial_id = 0;
    std::from_chars(cells[0].data(), cells[0].data() + cells[0].size(), trial_id);
    const Algorithm alg = parse_algorithm(cells[1]);
    TraceRow row;
    std::from_chars(cells[2].data(), cells[2].data() + cells[2].size(), row.t);
    row.objective = parse_double(cells[3]);
    row.regret_cum = parse_double(cells[4]);
    row.infeasibility = parse_double(cells[5]);
    row.distance_to_opt = parse_double(cells[6]);
    row.max_lambda = parse_double(cells[7]);
    row.min_slack = parse_double(cells[8]);
    if (out.empty() || out.back().trial_id != trial_id || out.back().algorithm != alg)
      out.push_back(TrialTrace{trial_id, alg, {}});
    out.back().rows.push_back(row);
  }
  return out;
}

std::string trace_file_name(int trial_id, Algorithm algorithm) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "trace_%04d_%s.csv", trial_id,
                std::string(to_string(algorithm)).c_str());
  return buf;
}

SummaryStats summarize_directory(const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    const auto name = entry.path().filename().string();
    if (entry.is_regular_file() && name.starts_with("trace_") && name.ends_with(".csv"))
      files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<TrialTrace> traces;
  for (const auto& f : files) {
    std::ifstream in(f, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    for (auto& tr : parse_trace_csv(ss.str())) traces.push_back(std::move(tr));
  }
  return summarize(traces);
}

}  // namespace safenum
