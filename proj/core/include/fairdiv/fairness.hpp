#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "fairdiv/allocate.hpp"
#include "fairdiv/instance.hpp"

namespace fairdiv {

// Cross-valuations value(i, j) = u_i(A_j). Envy comparisons are exact sums,
// no tolerance: with continuous utilities ties are measure zero, and the
// checkers must not paper over real violations.
struct EnvyMatrix {
  int n = 0;
  std::vector<double> value;  // row-major n x n

  double at(int i, int j) const {
    return value[static_cast<std::size_t>(i) * n + j];
  }
  // How much i prefers j's bundle over its own (positive = envy).
  double envy(int i, int j) const { return at(i, j) - at(i, i); }
  double max_envy() const;
};

EnvyMatrix envy_matrix(const Instance& inst, const Allocation& alloc);

bool is_envy_free(const Instance& inst, const Allocation& alloc);

// Envy-free up to one item: for every pair, removing i's best item from
// j's bundle kills the envy.
bool is_ef1(const Instance& inst, const Allocation& alloc);

// Fractional Pareto optimality certificate: with positive weights w, an
// allocation where every item sits with an agent maximizing w_i u_ia is
// fPO. Passes when each owner attains at least (1 - tolerance) times the
// item's best weighted value.
bool fpo_certificate_check(const Instance& inst, const Allocation& alloc,
                           const MultiplierVector& weights,
                           double tolerance = 1e-9);

// A bundle reshuffle between two agents that makes neither worse and at
// least one strictly better.
struct ParetoImprovement {
  std::vector<std::pair<int, int>> moves;  // (item, new owner)
  std::vector<double> deltas;              // utility change per agent
};

// Searches all ordered agent pairs for a Pareto improvement. The depth is
// the largest number of items either side cedes in one trade:
//   depth >= 1: single-item transfers and one-for-one swaps
//   depth >= 2: also two-for-one and two-for-two trades
// Deterministic: pairs are scanned in index order, cheaper move classes
// first, and the first improvement found is returned.
std::optional<ParetoImprovement> find_pareto_improvement(
    const Instance& inst, const Allocation& alloc, int depth = 2);

// Exhaustive Pareto optimality check against every integral allocation;
// guarded to n^m <= 2^22.
bool is_pareto_optimal_bruteforce(const Instance& inst,
                                  const Allocation& alloc);

}  // namespace fairdiv
