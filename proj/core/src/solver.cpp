#include "fairdiv/solver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fairdiv/errors.hpp"
#include "fairdiv/random.hpp"

namespace fairdiv {

namespace {

void validate(const ProbabilityOracle& oracle, const SolverConfig& cfg) {
  if (!(cfg.delta > 0.0) || cfg.delta > 1.0)
    throw std::invalid_argument("solver: delta must be in (0, 1]");
  if (!(cfg.q_bound > 0.0))
    throw std::invalid_argument("solver: q_bound must be > 0");
  if (!cfg.initial_exponents.empty() &&
      static_cast<int>(cfg.initial_exponents.size()) != oracle.size())
    throw std::invalid_argument("solver: initial exponent count != agents");
}

std::uint64_t stage_bound(double q, double eps, int n) {
  const double lg = std::log(2.0 * q);
  if (lg <= 0.0) return 0;
  return static_cast<std::uint64_t>(std::ceil(lg / std::log1p(eps))) *
         static_cast<std::uint64_t>(n - 1);
}

MultiplierVector exponents_to_multipliers(const std::vector<long long>& z,
                                          double eps) {
  MultiplierVector beta(z.size());
  const double le = std::log1p(eps);
  for (std::size_t i = 0; i < z.size(); ++i)
    beta[i] = std::exp(static_cast<double>(z[i]) * le);
  return beta;
}

// Runs one stage of the step dynamics at fixed eps, mutating z in place.
// Returns the stage summary; fills the trace history when requested.
SolverStage run_stage(const ProbabilityOracle& oracle, const SolverConfig& cfg,
                      double delta, double eps, std::vector<long long>& z,
                      SolverTrace& trace) {
  const int n = oracle.size();
  const double target = 1.0 / n;

  SolverStage stage;
  stage.delta = delta;
  stage.epsilon = eps;
  stage.iteration_bound = stage_bound(cfg.q_bound, eps, n);
  stage.first_history_index = trace.exponent_history.size();
  const std::uint64_t budget =
      cfg.max_iterations.value_or(2 * stage.iteration_bound);

  const std::uint64_t queries_before = oracle.query_count();
  for (;;) {
    const MultiplierVector beta = exponents_to_multipliers(z, eps);
    const ProbabilityVector p = oracle(beta);

    bool within = true;
    for (int i = 0; i < n; ++i)
      if (std::abs(p[i] - target) > delta) within = false;
    if (within) {
      trace.final_probabilities = p;
      break;
    }
    if (stage.iterations >= budget)
      throw numerical_error(
          "equalize: iteration budget exhausted; the q bound is likely "
          "smaller than the true density bound");

    std::vector<int> step_set;
    for (int i = 0; i < n; ++i)
      if (p[i] <= target) step_set.push_back(i);
    if (step_set.empty() || static_cast<int>(step_set.size()) == n)
      throw numerical_error(
          "equalize: inconsistent probability vector (does not straddle "
          "1/n)");

    if (cfg.record_history) {
      trace.exponent_history.push_back(z);
      trace.probability_history.push_back(p);
      trace.step_sets.push_back(step_set);
    }
    for (int i : step_set) ++z[i];
    ++stage.iterations;
  }
  stage.oracle_queries = (oracle.query_count() - queries_before) / n;
  return stage;
}

SolverResult finish(const SolverConfig& cfg, std::vector<long long> z,
                    double final_eps, SolverTrace trace) {
  SolverResult out;
  trace.epsilon = final_eps;
  trace.final_exponents = z;
  for (const auto& s : trace.stages) {
    trace.iterations += s.iterations;
    trace.oracle_queries += s.oracle_queries;
  }
  out.multipliers = exponents_to_multipliers(z, final_eps);
  out.trace = std::move(trace);
  (void)cfg;
  return out;
}

}  // namespace

SolverResult equalize_fixed_eps(const ProbabilityOracle& oracle,
                                const SolverConfig& cfg) {
  validate(oracle, cfg);
  const int n = oracle.size();
  const double eps = cfg.delta / (2.0 * cfg.q_bound);
  std::vector<long long> z = cfg.initial_exponents;
  z.resize(n, 0);

  SolverTrace trace;
  trace.stages.push_back(run_stage(oracle, cfg, cfg.delta, eps, z, trace));
  return finish(cfg, std::move(z), eps, std::move(trace));
}

SolverResult equalize_annealed(const ProbabilityOracle& oracle,
                               const SolverConfig& cfg) {
  validate(oracle, cfg);
  if (!(cfg.anneal_initial_delta > 0.0))
    throw std::invalid_argument("solver: anneal_initial_delta must be > 0");
  const int n = oracle.size();

  std::vector<double> deltas;
  if (cfg.delta >= cfg.anneal_initial_delta) {
    deltas.push_back(cfg.delta);
  } else {
    double d = cfg.anneal_initial_delta;
    deltas.push_back(d);
    while (d > cfg.delta) {
      d = std::max(cfg.delta, d / 2.0);
      deltas.push_back(d);
    }
  }

  std::vector<long long> z = cfg.initial_exponents;
  z.resize(n, 0);

  SolverTrace trace;
  double prev_eps = 0.0;
  for (double d : deltas) {
    const double eps = d / (2.0 * cfg.q_bound);
    if (prev_eps > 0.0 && eps != prev_eps) {
      // Carry the point over to the finer grid: match log multipliers.
      const double scale = std::log1p(prev_eps) / std::log1p(eps);
      for (auto& zi : z)
        zi = std::llround(static_cast<double>(zi) * scale);
    }
    trace.stages.push_back(run_stage(oracle, cfg, d, eps, z, trace));
    prev_eps = eps;
  }
  return finish(cfg, std::move(z), prev_eps, std::move(trace));
}

UniquenessReport check_uniqueness(const ProbabilityOracle& oracle, int runs,
                                  std::uint64_t seed,
                                  const SolverConfig& cfg) {
  validate(oracle, cfg);
  if (runs < 2) throw std::invalid_argument("check_uniqueness: runs >= 2");
  const int n = oracle.size();
  // The annealed solver's first stage runs at this eps; its Sperner box is
  // the natural region for random restarts.
  const double first_eps =
      std::max(cfg.delta, cfg.anneal_initial_delta) / (2.0 * cfg.q_bound);
  const long long box = static_cast<long long>(
      std::ceil(std::max(std::log(2.0 * cfg.q_bound), 0.0) /
                std::log1p(first_eps)));

  UniquenessReport report;
  report.runs = runs;
  report.threshold = 10.0 * cfg.delta * n;

  std::vector<std::vector<double>> logs;
  for (int r = 0; r < runs; ++r) {
    RandomSource rng(derive_seed(seed, 0xa11, static_cast<std::uint64_t>(r)));
    SolverConfig run_cfg = cfg;
    run_cfg.initial_exponents.assign(n, 0);
    for (auto& zi : run_cfg.initial_exponents)
      zi = rng.uniform_int(-box, box);
    const SolverResult res = equalize_annealed(oracle, run_cfg);

    std::vector<double> lb(n);
    for (int i = 0; i < n; ++i)
      lb[i] = std::log(res.multipliers[i]) - std::log(res.multipliers[0]);
    logs.push_back(lb);

    MultiplierVector norm(n);
    for (int i = 0; i < n; ++i) norm[i] = std::exp(lb[i]);
    report.multipliers.push_back(std::move(norm));
  }

  for (std::size_t a = 0; a < logs.size(); ++a)
    for (std::size_t b = a + 1; b < logs.size(); ++b)
      for (int i = 0; i < n; ++i)
        report.max_pairwise_distance =
            std::max(report.max_pairwise_distance,
                     std::abs(logs[a][i] - logs[b][i]));
  report.passed = report.max_pairwise_distance <= report.threshold;
  return report;
}

nlohmann::json SolverTrace::to_json() const {
  nlohmann::json j;
  j["epsilon"] = epsilon;
  j["iterations"] = iterations;
  j["oracle_queries"] = oracle_queries;
  j["final_exponents"] = final_exponents;
  j["final_probabilities"] = final_probabilities;
  nlohmann::json st = nlohmann::json::array();
  for (const auto& s : stages)
    st.push_back({{"delta", s.delta},
                  {"epsilon", s.epsilon},
                  {"iterations", s.iterations},
                  {"iteration_bound", s.iteration_bound},
                  {"oracle_queries", s.oracle_queries},
                  {"first_history_index", s.first_history_index}});
  j["stages"] = st;
  if (!exponent_history.empty()) {
    nlohmann::json hist = nlohmann::json::array();
    for (std::size_t k = 0; k < exponent_history.size(); ++k)
      hist.push_back({{"exponents", exponent_history[k]},
                      {"probabilities", probability_history[k]},
                      {"stepped", step_sets[k]}});
    j["history"] = hist;
  }
  return j;
}

}  // namespace fairdiv
