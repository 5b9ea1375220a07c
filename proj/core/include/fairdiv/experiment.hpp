#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "fairdiv/allocate.hpp"
#include "fairdiv/profile.hpp"

namespace fairdiv {

enum class AlgorithmKind {
  Multiplier,
  WelfareMax,
  RoundRobin,
  MaxPercentile,
  NormalizingMultiplier,
  RoundedMnw,
};

std::string algorithm_name(AlgorithmKind kind);
AlgorithmKind algorithm_from_name(const std::string& name);

struct AlgorithmSpec {
  AlgorithmKind kind;
  // Run find_pareto_improvement per trial. Defaults to on for the
  // algorithms lacking an fPO certificate (round robin, max percentile).
  bool search_po_violation = false;
  // Report the fPO certificate pass rate (only meaningful for algorithms
  // that produce certifying weights).
  bool check_fpo = false;
  // Skip grid sizes above this (for algorithms too slow at large m).
  std::optional<int> max_m;
};

// Canonical metric set for each algorithm.
AlgorithmSpec default_algorithm_spec(AlgorithmKind kind);

struct ExperimentConfig {
  AgentProfile profile;
  std::vector<int> m_grid;
  int trials = 100;
  std::uint64_t base_seed = 1;
  int workers = 0;  // 0 = one per hardware thread
  std::vector<AlgorithmSpec> algorithms;

  // Multiplier pipeline settings.
  double delta_floor = 1e-6;
  std::optional<double> p_bound;
  std::optional<double> q_bound;

  double mnw_tolerance = 1e-5;
  int improvement_depth = 2;

  nlohmann::json to_json() const;
  static ExperimentConfig from_json(const nlohmann::json& j);
};

struct CellResult {
  std::string algorithm;
  int m = 0;
  int trials = 0;
  long long ef_count = 0;
  long long ef1_count = 0;
  long long po_violation_count = 0;   // improvements found
  long long fpo_certified_count = 0;  // certificate passes
  bool po_searched = false;
  bool fpo_checked = false;
  double seconds = 0.0;  // total wall time attributed to this cell
};

struct ExperimentResult {
  std::string profile_name;
  std::uint64_t base_seed = 0;
  std::vector<CellResult> cells;
  // Present when the multiplier algorithm ran.
  MultiplierVector multipliers;
  nlohmann::json solver_info;  // delta, iterations, oracle queries

  nlohmann::json to_json() const;
};

// Deterministic instance generator: agent i's item values are drawn from
// profile.agents[i], items in index order, agents inner-loop. The same
// (profile, m, seed) always yields the same matrix.
Instance sample_instance(const AgentProfile& profile, int m,
                         std::uint64_t seed);

// 95% Wilson score interval for a binomial rate.
std::pair<double, double> wilson_interval(long long successes,
                                          long long trials);

// Runs trials x m_grid cells for every algorithm. Per-trial seeds are
// derived from (base_seed, grid index, trial index), so results do not
// depend on the worker count; all algorithms see the same instances.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

// CSV with the fixed header
//   algorithm,m,metric,rate,ci_lo,ci_hi,trials,seconds
// one row per (cell, metric). The seconds column reports measured wall
// time and is exempt from byte-for-byte determinism.
void write_csv(const ExperimentResult& result, std::ostream& out);

struct CsvRow {
  std::string algorithm;
  int m = 0;
  std::string metric;
  double rate = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 0.0;
  long long trials = 0;
  double seconds = 0.0;
};

std::vector<CsvRow> parse_csv(std::istream& in);

}  // namespace fairdiv
