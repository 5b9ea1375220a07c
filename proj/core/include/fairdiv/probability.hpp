#pragma once

#include <atomic>
#include <cstdint>
#include <memory>
#include <mutex>
#include <vector>

#include "fairdiv/profile.hpp"
#include "fairdiv/quadrature.hpp"
#include "fairdiv/random.hpp"

namespace fairdiv {

// Multipliers and win probabilities are plain per-agent vectors.
using MultiplierVector = std::vector<double>;
using ProbabilityVector = std::vector<double>;

// Rescale so the smallest multiplier is exactly 1. Win probabilities are
// invariant under common scaling, so this is the canonical representative.
MultiplierVector normalize_min_one(MultiplierVector beta);

// Probability that agent i receives an item when every agent draws a fresh
// value u_j from its distribution and the item goes to the largest scaled
// value beta_j u_j:
//
//   p_i = integral f_i(u) prod_{j != i} F_j(beta_i u / beta_j) du
//
// computed by adaptive quadrature with forced cuts at all (rescaled)
// support endpoints and density kinks.
ProbabilityVector resulting_probabilities(const AgentProfile& profile,
                                          const MultiplierVector& beta,
                                          const QuadratureOptions& opts = {});

// Monte Carlo estimate of the same vector from `samples` independent items.
ProbabilityVector resulting_probabilities_mc(const AgentProfile& profile,
                                             const MultiplierVector& beta,
                                             std::uint64_t samples,
                                             RandomSource& rng);

// Expected value of u_i conditional on agent i winning the item. Throws
// std::domain_error when the win probability is numerically zero.
double expected_utility_given_win(const AgentProfile& profile,
                                  const MultiplierVector& beta, int i,
                                  const QuadratureOptions& opts = {});

// Expected value of u_i conditional on agent j (!= i) winning the item.
double expected_utility_given_other_wins(const AgentProfile& profile,
                                         const MultiplierVector& beta, int i,
                                         int j,
                                         const QuadratureOptions& opts = {});

// Worst-case lower bound on the conditional utility gap
// E[u_i | i wins] - E[u_i | j wins] for profiles with interval support and
// density bounds (p, q), together with the intermediate quantities the
// bound is assembled from.
struct GapConstants {
  double overlap_floor;  // guaranteed overlap length of rescaled supports
  double slope_floor;    // lower bound on the rescaled cdf slope
  double tail_floor;     // mass guaranteed in the overlap tails
  double gap;            // p^2 / (2^20 q^7)
};

GapConstants gap_constants(double p, double q);
double gap_constant(double p, double q);

// Win probability evaluator handed to the multiplier solvers. Either backend
// evaluates the full vector per query; the query counter advances by one per
// agent per evaluation.
class ProbabilityOracle {
 public:
  struct McConfig {
    std::uint64_t samples;
    std::uint64_t seed;
  };

  explicit ProbabilityOracle(AgentProfile profile, QuadratureOptions opts = {});
  ProbabilityOracle(AgentProfile profile, McConfig mc);

  ProbabilityOracle(const ProbabilityOracle&) = delete;
  ProbabilityOracle& operator=(const ProbabilityOracle&) = delete;

  const AgentProfile& profile() const { return profile_; }
  int size() const { return profile_.size(); }
  bool monte_carlo() const { return mc_.has_value(); }

  ProbabilityVector operator()(const MultiplierVector& beta) const;

  std::uint64_t query_count() const { return queries_.load(); }

 private:
  AgentProfile profile_;
  QuadratureOptions opts_;
  std::optional<McConfig> mc_;
  mutable std::optional<RandomSource> mc_rng_;
  mutable std::mutex mc_mutex_;
  mutable std::atomic<std::uint64_t> queries_{0};
};

}  // namespace fairdiv
