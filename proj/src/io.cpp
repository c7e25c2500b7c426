#include "safenum/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace safenum {

namespace {

Json vector_to_json(const Vector& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

Vector vector_from_json(const Json& doc, Eigen::Index expected, const char* field) {
  if (!doc.is_array() || static_cast<Eigen::Index>(doc.size()) != expected)
    throw std::invalid_argument(std::string("field '") + field + "' has wrong length");
  Vector v(expected);
  for (Eigen::Index i = 0; i < expected; ++i) v[i] = doc[i].get<double>();
  return v;
}

double bound_from_json(const Json& v) {
  if (v.is_string()) {
    if (v.get<std::string>() == "inf") return kInf;
    throw std::invalid_argument("bound must be a number or \"inf\"");
  }
  return v.get<double>();
}

Json bound_to_json(double v) { return std::isinf(v) ? Json("inf") : Json(v); }

Json problem_body(const NumProblem& p) {
  Json doc;
  doc["n"] = p.n;
  doc["m"] = p.m;
  Json a = Json::array();
  for (int j = 0; j < p.m; ++j) {
    Json row = Json::array();
    for (int i = 0; i < p.n; ++i) row.push_back(p.a(j, i));
    a.push_back(std::move(row));
  }
  doc["A"] = std::move(a);
  doc["c"] = vector_to_json(p.capacities);
  Json theta = Json::array(), lower = Json::array(), upper = Json::array();
  bool shared_shift = true;
  for (const auto& u : p.utilities) {
    theta.push_back(u.theta);
    lower.push_back(u.lower);
    upper.push_back(bound_to_json(u.upper));
    if (u.shift != p.utilities.front().shift) shared_shift = false;
  }
  doc["theta"] = std::move(theta);
  if (shared_shift && !p.utilities.empty()) {
    doc["shift"] = p.utilities.front().shift;
  } else {
    Json shifts = Json::array();
    for (const auto& u : p.utilities) shifts.push_back(u.shift);
    doc["shift"] = std::move(shifts);
  }
  doc["lower"] = std::move(lower);
  doc["upper"] = std::move(upper);
  return doc;
}

}  // namespace

Json problem_to_json(const NumProblem& problem) {
  Json doc = problem_body(problem);
  doc["seed"] = problem.seed;
  return doc;
}

NumProblem problem_from_json(const Json& doc) {
  NumProblem p;
  p.n = doc.at("n").get<int>();
  p.m = doc.at("m").get<int>();
  if (p.n <= 0 || p.m <= 0) throw std::invalid_argument("n and m must be positive");
  const Json& a = doc.at("A");
  if (!a.is_array() || static_cast<int>(a.size()) != p.m)
    throw std::invalid_argument("field 'A' must have m rows");
  p.a.resize(p.m, p.n);
  for (int j = 0; j < p.m; ++j) {
    if (!a[j].is_array() || static_cast<int>(a[j].size()) != p.n)
      throw std::invalid_argument("field 'A' rows must have n entries");
    for (int i = 0; i < p.n; ++i) p.a(j, i) = a[j][i].get<std::int32_t>();
  }
  p.capacities = vector_from_json(doc.at("c"), p.m, "c");
  const Vector theta = vector_from_json(doc.at("theta"), p.n, "theta");
  const Json& shift = doc.at("shift");
  const Json& lower = doc.at("lower");
  const Json& upper = doc.at("upper");
  if (!lower.is_array() || static_cast<int>(lower.size()) != p.n || !upper.is_array() ||
      static_cast<int>(upper.size()) != p.n)
    throw std::invalid_argument("fields 'lower'/'upper' must have n entries");
  if (shift.is_array() && static_cast<int>(shift.size()) != p.n)
    throw std::invalid_argument("field 'shift' has wrong length");
  p.utilities.resize(p.n);
  for (int i = 0; i < p.n; ++i) {
    auto& u = p.utilities[i];
    u.theta = theta[i];
    u.shift = shift.is_array() ? shift[i].get<double>() : shift.get<double>();
    u.lower = bound_from_json(lower[i]);
    u.upper = bound_from_json(upper[i]);
  }
  p.seed = doc.value("seed", std::uint64_t{0});
  return p;
}

Json solution_to_json(const OptimalSolution& s) {
  Json doc;
  doc["x_star"] = vector_to_json(s.x_star);
  doc["f_star"] = s.f_star;
  doc["lambda_star"] = vector_to_json(s.lambda_star);
  doc["kkt_residual"] = s.kkt_residual;
  doc["iterations_used"] = s.iterations_used;
  return doc;
}

OptimalSolution solution_from_json(const Json& doc) {
  OptimalSolution s;
  const Json& x = doc.at("x_star");
  const Json& l = doc.at("lambda_star");
  s.x_star = vector_from_json(x, static_cast<Eigen::Index>(x.size()), "x_star");
  s.lambda_star = vector_from_json(l, static_cast<Eigen::Index>(l.size()), "lambda_star");
  s.f_star = doc.at("f_star").get<double>();
  s.kkt_residual = doc.at("kkt_residual").get<double>();
  s.iterations_used = doc.at("iterations_used").get<int>();
  return s;
}

Json config_to_json(const ExperimentConfig& c) {
  Json gen;
  gen["n_range"] = {c.generator.n_range.lo, c.generator.n_range.hi};
  gen["m_range"] = {c.generator.m_range.lo, c.generator.m_range.hi};
  gen["theta_range"] = {c.generator.theta_range.lo, c.generator.theta_range.hi};
  gen["capacity_value"] = c.generator.capacity_value;
  gen["bernoulli_p"] = c.generator.bernoulli_p;
  Json doc;
  doc["generator"] = std::move(gen);
  doc["horizon"] = c.horizon;
  doc["trials"] = c.trials;
  Json algs = Json::array();
  for (Algorithm a : c.algorithms) algs.push_back(std::string(to_string(a)));
  doc["algorithms"] = std::move(algs);
  doc["master_seed"] = c.master_seed;
  doc["output_dir"] = c.output_dir.string();
  doc["workers"] = c.workers;
  doc["gamma"] = c.gamma ? Json(*c.gamma) : Json(nullptr);
  doc["oracle_tolerance"] = c.oracle_tolerance;
  return doc;
}

ExperimentConfig config_from_json(const Json& doc) {
  ExperimentConfig c;
  if (doc.contains("generator")) {
    const Json& g = doc["generator"];
    if (g.contains("n_range")) c.generator.n_range = {g["n_range"][0], g["n_range"][1]};
    if (g.contains("m_range")) c.generator.m_range = {g["m_range"][0], g["m_range"][1]};
    if (g.contains("theta_range"))
      c.generator.theta_range = {g["theta_range"][0], g["theta_range"][1]};
    c.generator.capacity_value = g.value("capacity_value", c.generator.capacity_value);
    c.generator.bernoulli_p = g.value("bernoulli_p", c.generator.bernoulli_p);
  }
  c.horizon = doc.value("horizon", c.horizon);
  c.trials = doc.value("trials", c.trials);
  if (doc.contains("algorithms")) {
    c.algorithms.clear();
    for (const auto& a : doc["algorithms"]) c.algorithms.push_back(parse_algorithm(a.get<std::string>()));
  }
  c.master_seed = doc.value("master_seed", c.master_seed);
  c.output_dir = doc.value("output_dir", std::string{});
  c.workers = doc.value("workers", c.workers);
  if (doc.contains("gamma") && !doc["gamma"].is_null()) c.gamma = doc["gamma"].get<double>();
  c.oracle_tolerance = doc.value("oracle_tolerance", c.oracle_tolerance);
  if (c.horizon < 1 || c.trials < 1 || c.workers < 1)
    throw std::invalid_argument("horizon, trials and workers must be at least 1");
  return c;
}

std::uint64_t problem_hash(const NumProblem& problem) {
  const std::string canonical = problem_body(problem).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : canonical) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return Json::parse(in);
}

void write_json_file(const std::filesystem::path& path, const Json& doc) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << doc.dump(2) << '\n';
}

OptimalSolution OracleCache::solve(const NumProblem& problem) {
  const std::uint64_t key = problem_hash(problem);
  {
    std::lock_guard lock(mutex_);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
  }
  std::filesystem::path file;
  if (!dir_.empty()) {
    std::ostringstream name;
    name << std::hex << key << ".json";
    file = dir_ / name.str();
    if (std::filesystem::exists(file)) {
      const Json doc = read_json_file(file);
      NumProblem stored = problem_from_json(doc.at("problem"));
      stored.seed = problem.seed;
      if (stored == problem) {
        OptimalSolution s = solution_from_json(doc.at("solution"));
        std::lock_guard lock(mutex_);
        memo_.emplace(key, s);
        return s;
      }
    }
  }
  OptimalSolution s = solve_optimal(problem, tolerance_);
  if (!file.empty()) {
    std::filesystem::create_directories(dir_);
    write_json_file(file, Json{{"problem", problem_to_json(problem)},
                               {"solution", solution_to_json(s)}});
  }
  std::lock_guard lock(mutex_);
  ++misses_;
  memo_.emplace(key, s);
  return s;
}

int OracleCache::misses() const {
  std::lock_guard lock(mutex_);
  return misses_;
}

std::size_t OracleCache::size() const {
  std::lock_guard lock(mutex_);
  return memo_.size();
}

}  // namespace safenum
