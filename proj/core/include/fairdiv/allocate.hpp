#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "fairdiv/instance.hpp"
#include "fairdiv/profile.hpp"
#include "fairdiv/solver.hpp"

namespace fairdiv {

// A complete assignment of items to agents.
struct Allocation {
  int n = 0;
  std::vector<int> owners;  // size m, each in [0, n)

  std::vector<std::vector<int>> bundles() const;
  // Realized bundle utilities u_i(A_i).
  std::vector<double> bundle_utilities(const Instance& inst) const;

  nlohmann::json to_json() const;
  static Allocation from_json(const nlohmann::json& j);
};

// Assign each item to the agent with the largest multiplier-scaled utility
// beta_i u_i, lowest index on ties.
Allocation multiplier_allocation(const Instance& inst,
                                 const MultiplierVector& beta);

// Utilitarian welfare maximizer: each item to the agent valuing it most.
Allocation welfare_max_allocation(const Instance& inst);

// Agents pick in fixed cyclic order 0, 1, ..., n-1, each taking its
// highest-valued remaining item (lowest item index on ties).
Allocation round_robin(const Instance& inst);

// Each item to the agent whose realized value sits at the highest quantile
// of its own distribution: argmax_i F_i(u_i), lowest index on ties.
Allocation max_percentile_allocation(const Instance& inst,
                                     const AgentProfile& profile);

// Multiplier allocation with beta_i = 1 / sum_a u_ia, i.e. utilities
// normalized by each agent's realized total. Throws std::domain_error if an
// agent values every item at zero.
Allocation normalizing_multiplier_allocation(const Instance& inst);

// Fractional allocation: shares[i * m + a] in [0, 1], columns sum to 1.
struct FractionalAllocation {
  int n = 0;
  int m = 0;
  std::vector<double> shares;

  double share(int agent, int item) const {
    return shares[static_cast<std::size_t>(agent) * m + item];
  }
};

struct MnwResult {
  FractionalAllocation shares;
  std::vector<double> agent_utilities;  // u_i(x_i) at the fixed point
  double kkt_gap = 0.0;  // largest relative bang-per-buck shortfall at exit
  int iterations = 0;
};

// Fractional maximum Nash welfare (equal budgets) by proportional response
// iteration. Exits once every positive share is within a factor
// (1 - 10 * tolerance) of the item's best bang-per-buck; raises
// numerical_error if max_iterations pass first.
MnwResult fractional_mnw(const Instance& inst, double tolerance = 1e-6,
                         int max_iterations = 500000);

// Integral rounding: each item to the agent holding its largest share,
// lowest index on ties.
Allocation round_fractional(const FractionalAllocation& x);

// Exhaustive maximum Nash welfare over integral allocations, for tiny
// instances only (guarded to n <= 3, m <= 10). Maximizes lexicographically
// the number of agents with positive utility, then the product over those
// agents; reports the geometric mean over all n agents (zero if anyone
// ends up at zero).
struct BruteforceMnwResult {
  Allocation allocation;
  double nash_welfare = 0.0;
};
BruteforceMnwResult max_nash_welfare_bruteforce(const Instance& inst);

// Geometric mean of realized bundle utilities.
double nash_welfare(const Instance& inst, const Allocation& alloc);

// End-to-end pipeline: pick the accuracy target delta from the density
// bounds (clamped between delta_floor and 1/(4n)), equalize multipliers with
// the annealed solver, then allocate each item to the largest scaled value.
struct PipelineConfig {
  double delta_floor = 1e-6;
  std::optional<double> p_bound;  // override profile density bounds
  std::optional<double> q_bound;
  SolverConfig solver;  // delta and q_bound are filled in by the pipeline
};

struct PipelineMultipliers {
  MultiplierVector multipliers;
  SolverTrace trace;
  double delta = 0.0;  // accuracy target actually used
  // The theory-backed target C_{p,q} / (4n); unset when the profile carries
  // no density bounds.
  std::optional<double> theoretical_delta;
  std::vector<std::string> warnings;
};

PipelineMultipliers compute_pipeline_multipliers(
    const AgentProfile& profile, const PipelineConfig& cfg = {});

struct PipelineResult {
  Allocation allocation;
  PipelineMultipliers solve;
};

PipelineResult approximate_multiplier_pipeline(const AgentProfile& profile,
                                               const Instance& inst,
                                               const PipelineConfig& cfg = {});

}  // namespace fairdiv
