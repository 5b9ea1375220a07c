#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <nlohmann/json.hpp>

#include "fairdiv/probability.hpp"

namespace fairdiv {

// Configuration for the equalizing multiplier solvers. The solvers walk a
// geometric grid beta_i = (1 + eps)^{z_i}, raising the exponents of all
// agents whose win probability is at or below 1/n until every probability
// sits within delta of 1/n. The step size is tied to the density bound q by
// eps = delta / (2 q), which caps the per-step probability change at delta.
struct SolverConfig {
  double delta = 1e-5;   // target half-width of the band around 1/n
  double q_bound = 0.0;  // upper density bound used to size steps (required)
  // Iteration budget per stage. Defaults to twice the theoretical bound
  // ceil(log(2q) / log(1+eps)) * (n-1); exceeding it raises numerical_error.
  std::optional<std::uint64_t> max_iterations;
  double anneal_initial_delta = 0.1;  // first-stage band of the annealed run
  bool record_history = false;  // keep per-iteration exponents/probabilities
  std::vector<long long> initial_exponents;  // warm start; empty means zeros
};

struct SolverStage {
  double delta = 0.0;
  double epsilon = 0.0;
  std::uint64_t iterations = 0;
  std::uint64_t iteration_bound = 0;  // theoretical bound for a cold start
  std::uint64_t oracle_queries = 0;   // full-vector evaluations
  std::uint64_t first_history_index = 0;
};

struct SolverTrace {
  double epsilon = 0.0;  // grid ratio of the final stage
  std::uint64_t iterations = 0;
  std::uint64_t oracle_queries = 0;
  std::vector<SolverStage> stages;
  std::vector<long long> final_exponents;
  ProbabilityVector final_probabilities;
  // Populated when SolverConfig::record_history is set. Entry k holds the
  // state at the top of iteration k (before that iteration's step) and the
  // set of agents stepped.
  std::vector<std::vector<long long>> exponent_history;
  std::vector<ProbabilityVector> probability_history;
  std::vector<std::vector<int>> step_sets;

  nlohmann::json to_json() const;
};

struct SolverResult {
  MultiplierVector multipliers;  // (1+eps)^z of the final stage, unnormalized
  SolverTrace trace;
};

// Single-stage run at eps = delta / (2 q).
SolverResult equalize_fixed_eps(const ProbabilityOracle& oracle,
                                const SolverConfig& cfg);

// Annealed run: the band starts at anneal_initial_delta and halves until it
// reaches cfg.delta; each stage reuses the previous stage's exponents,
// rescaled to the finer grid. Much cheaper than a cold fixed-eps run at
// small delta.
SolverResult equalize_annealed(const ProbabilityOracle& oracle,
                               const SolverConfig& cfg);

// Exhaustive fixed-point location on the Sperner grid, independent of the
// iterative solvers; supports n <= 3 (the grid is exponential in n).
// Colors each grid point by its most-favored agent and path-follows door
// edges to a panchromatic cell; returns the cell corner with the smallest
// probability spread. Throws numerical_error if no panchromatic cell is
// found, which indicates an understated q bound.
MultiplierVector sperner_grid_search(const ProbabilityOracle& oracle,
                                     double delta, double q_bound);

// Reruns the annealed solver from random starting exponents drawn uniformly
// from the Sperner grid box and reports how far apart the normalized
// (first agent pinned to 1) log multipliers land.
struct UniquenessReport {
  int runs = 0;
  double max_pairwise_distance = 0.0;  // L_inf over agents of log ratios
  double threshold = 0.0;              // 10 * delta * n
  bool passed = false;
  std::vector<MultiplierVector> multipliers;  // normalized, one per run
};

UniquenessReport check_uniqueness(const ProbabilityOracle& oracle, int runs,
                                  std::uint64_t seed, const SolverConfig& cfg);

}  // namespace fairdiv
