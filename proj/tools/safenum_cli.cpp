// Command-line front end: generate instances, solve them, run single
// algorithms, run the full comparison, and re-aggregate saved traces.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "safenum/harness.hpp"
#include "safenum/io.hpp"
#include "safenum/oracle.hpp"
#include "safenum/problem.hpp"

namespace {

using namespace safenum;

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty() || out_path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + out_path);
  out << text;
}

std::vector<Algorithm> parse_algorithms(const std::vector<std::string>& names) {
  std::vector<Algorithm> out;
  for (const auto& joined : names) {
    std::size_t start = 0;
    while (start <= joined.size()) {
      const std::size_t comma = joined.find(',', start);
      const std::string token = joined.substr(start, comma - start);
      if (!token.empty()) out.push_back(parse_algorithm(token));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
  }
  return out;
}

int fail(const std::string& type, const std::string& message, std::optional<int> trial = {},
         std::optional<std::uint64_t> seed = {}) {
  Json err{{"error", {{"type", type}, {"message", message}}}};
  if (trial) err["error"]["trial_id"] = *trial;
  if (seed) err["error"]["seed"] = *seed;
  std::cerr << err.dump() << '\n';
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Safe dual gradient pricing for network utility maximization"};
  app.require_subcommand(1);

  // generate
  auto* gen = app.add_subcommand("generate", "Emit random problem documents");
  std::uint64_t gen_seed = 0;
  int gen_trials = 1;
  std::string gen_out;
  gen->add_option("--seed", gen_seed, "Master seed");
  gen->add_option("--trials", gen_trials, "Number of instances")->check(CLI::PositiveNumber);
  gen->add_option("--out", gen_out, "Output file (one instance) or directory");

  // solve
  auto* solve = app.add_subcommand("solve", "Reference optimum of a problem file");
  std::string solve_in, solve_out;
  double solve_tol = 1e-8;
  solve->add_option("problem", solve_in, "Problem document")->required()->check(CLI::ExistingFile);
  solve->add_option("--tolerance", solve_tol, "KKT tolerance")->check(CLI::PositiveNumber);
  solve->add_option("--out", solve_out, "Output file (default stdout)");

  // run
  auto* run = app.add_subcommand("run", "Run one algorithm on one problem, trace as CSV");
  std::string run_in, run_out;
  std::vector<std::string> run_algs{"SDGM"};
  int run_horizon = 1000;
  std::optional<double> run_gamma;
  run->add_option("problem", run_in, "Problem document")->required()->check(CLI::ExistingFile);
  run->add_option("--algorithms", run_algs, "Algorithm (SDGM, DGM, FDGM, NDGM)");
  run->add_option("--horizon", run_horizon, "Iterations T")->check(CLI::PositiveNumber);
  run->add_option("--gamma", run_gamma, "SDGM base step (default: regret-optimal)");
  run->add_option("--out", run_out, "Output file (default stdout)");

  // compare
  auto* cmp = app.add_subcommand("compare", "Full randomized comparison");
  std::string cmp_config;
  std::optional<std::uint64_t> cmp_seed;
  std::optional<int> cmp_trials, cmp_horizon, cmp_workers;
  std::optional<double> cmp_gamma;
  std::vector<std::string> cmp_algs;
  std::string cmp_out;
  cmp->add_option("--config", cmp_config, "Experiment config document")->check(CLI::ExistingFile);
  cmp->add_option("--seed", cmp_seed, "Master seed");
  cmp->add_option("--trials", cmp_trials, "Number of random networks")->check(CLI::PositiveNumber);
  cmp->add_option("--horizon", cmp_horizon, "Iterations T")->check(CLI::PositiveNumber);
  cmp->add_option("--gamma", cmp_gamma, "SDGM base step for every trial");
  cmp->add_option("--algorithms", cmp_algs, "Comma-separated subset of SDGM,DGM,FDGM,NDGM");
  cmp->add_option("--out", cmp_out, "Output directory");
  cmp->add_option("--workers", cmp_workers, "Concurrent trials")->check(CLI::PositiveNumber);

  // report
  auto* rep = app.add_subcommand("report", "Aggregate trace CSVs in a directory");
  std::string rep_dir, rep_out;
  rep->add_option("dir", rep_dir, "Directory with trace_*.csv")->required()->check(CLI::ExistingDirectory);
  rep->add_option("--out", rep_out, "Output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail("usage", e.what());
  }

  try {
    if (*gen) {
      const ExperimentConfig defaults;
      if (gen_trials == 1 && (gen_out.empty() || !std::filesystem::is_directory(gen_out))) {
        GeneratorConfig g = defaults.generator;
        g.seed = gen_seed;
        emit(problem_to_json(generate_random(g)).dump(2) + "\n", gen_out);
      } else {
        const std::filesystem::path dir = gen_out.empty() ? "." : gen_out;
        std::filesystem::create_directories(dir);
        for (int k = 0; k < gen_trials; ++k) {
          GeneratorConfig g = defaults.generator;
          g.seed = trial_seed(gen_seed, k);
          char name[32];
          std::snprintf(name, sizeof(name), "problem_%04d.json", k);
          write_json_file(dir / name, problem_to_json(generate_random(g)));
        }
      }
    } else if (*solve) {
      const NumProblem p = problem_from_json(read_json_file(solve_in));
      if (auto v = validate(p); !v.empty()) return fail("invalid_problem", v.front());
      const OptimalSolution s = solve_optimal(p, solve_tol);
      emit(solution_to_json(s).dump(2) + "\n", solve_out);
    } else if (*run) {
      const NumProblem p = problem_from_json(read_json_file(run_in));
      if (auto v = validate(p); !v.empty()) return fail("invalid_problem", v.front());
      const auto algs = parse_algorithms(run_algs);
      if (algs.size() != 1) return fail("usage", "run takes exactly one algorithm");
      const ProblemConstants k = compute_constants(p);
      const OptimalSolution opt = solve_optimal(p);
      RunOptions options;
      options.horizon = run_horizon;
      options.gamma = run_gamma;
      emit(format_trace_csv(run_algorithm(p, k, opt, algs.front(), options)), run_out);
    } else if (*cmp) {
      ExperimentConfig config;
      if (!cmp_config.empty()) config = config_from_json(read_json_file(cmp_config));
      if (cmp_seed) config.master_seed = *cmp_seed;
      if (cmp_trials) config.trials = *cmp_trials;
      if (cmp_horizon) config.horizon = *cmp_horizon;
      if (cmp_workers) config.workers = *cmp_workers;
      if (cmp_gamma) config.gamma = *cmp_gamma;
      if (!cmp_algs.empty()) config.algorithms = parse_algorithms(cmp_algs);
      if (!cmp_out.empty()) config.output_dir = cmp_out;
      const ExperimentResult result = run_experiment(config);
      double mean_final = 0.0;
      for (double v : result.summary.sdgm_final_normalized_regret) mean_final += v;
      Json summary{{"trials", config.trials},
                   {"horizon", config.horizon},
                   {"output_dir", config.output_dir.string()}};
      if (!result.summary.sdgm_final_normalized_regret.empty())
        summary["sdgm_mean_final_regret_over_sqrt_t"] =
            mean_final / result.summary.sdgm_final_normalized_regret.size();
      std::cout << summary.dump(2) << '\n';
    } else if (*rep) {
      emit(format_summary_csv(summarize_directory(rep_dir)), rep_out);
    }
  } catch (const TrialError& e) {
    return fail("trial_failure", e.what(), e.trial_id(), e.seed());
  } catch (const std::exception& e) {
    return fail("error", e.what());
  }
  return 0;
}
