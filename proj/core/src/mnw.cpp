#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fairdiv/allocate.hpp"
#include "fairdiv/errors.hpp"

namespace fairdiv {

// Proportional response dynamics for the equal-budget Fisher market whose
// equilibrium is the fractional maximum Nash welfare point: each agent
// spreads its unit budget over items in proportion to the utility it
// currently derives from them; items are then re-shared in proportion to
// the spending they attract.
MnwResult fractional_mnw(const Instance& inst, double tolerance,
                         int max_iterations) {
  inst.validate();
  if (!(tolerance > 0.0) || tolerance >= 0.1)
    throw std::invalid_argument("fractional_mnw: tolerance must be in (0, 0.1)");
  const int n = inst.n, m = inst.m;

  for (int i = 0; i < n; ++i) {
    double total = 0.0;
    for (int a = 0; a < m; ++a) total += inst.util(i, a);
    if (!(total > 0.0))
      throw std::domain_error(
          "fractional_mnw: an agent values all items at zero");
  }

  // bids[i][a]: agent i's spending on item a; start proportional to values.
  std::vector<double> bids(static_cast<std::size_t>(n) * m, 0.0);
  for (int i = 0; i < n; ++i) {
    double total = 0.0;
    for (int a = 0; a < m; ++a) total += inst.util(i, a);
    for (int a = 0; a < m; ++a)
      bids[static_cast<std::size_t>(i) * m + a] = inst.util(i, a) / total;
  }

  MnwResult out;
  out.shares.n = n;
  out.shares.m = m;
  out.shares.shares.assign(static_cast<std::size_t>(n) * m, 0.0);
  out.agent_utilities.assign(n, 0.0);
  std::vector<double> price(m, 0.0);

  const double share_floor = tolerance;  // shares below this are ignored
  const double kkt_target = 10.0 * tolerance;

  for (int it = 1; it <= max_iterations; ++it) {
    std::fill(price.begin(), price.end(), 0.0);
    for (int i = 0; i < n; ++i)
      for (int a = 0; a < m; ++a)
        price[a] += bids[static_cast<std::size_t>(i) * m + a];

    auto& x = out.shares.shares;
    for (int a = 0; a < m; ++a) {
      if (price[a] > 0.0) {
        for (int i = 0; i < n; ++i)
          x[static_cast<std::size_t>(i) * m + a] =
              bids[static_cast<std::size_t>(i) * m + a] / price[a];
      } else {
        // Item valued by nobody: park it with agent 0.
        for (int i = 0; i < n; ++i)
          x[static_cast<std::size_t>(i) * m + a] = i == 0 ? 1.0 : 0.0;
      }
    }

    auto& u = out.agent_utilities;
    std::fill(u.begin(), u.end(), 0.0);
    for (int i = 0; i < n; ++i)
      for (int a = 0; a < m; ++a)
        u[i] += inst.util(i, a) * x[static_cast<std::size_t>(i) * m + a];

    out.iterations = it;

    // KKT check every few iterations: every meaningfully held share must be
    // close to the item's best bang-per-buck u_ia / u_i(x_i).
    if (it % 8 == 0 || it == max_iterations) {
      double gap = 0.0;
      for (int a = 0; a < m; ++a) {
        double best = 0.0;
        for (int i = 0; i < n; ++i)
          best = std::max(best, inst.util(i, a) / u[i]);
        if (best <= 0.0) continue;
        for (int i = 0; i < n; ++i) {
          if (x[static_cast<std::size_t>(i) * m + a] <= share_floor) continue;
          const double ratio = inst.util(i, a) / u[i];
          gap = std::max(gap, 1.0 - ratio / best);
        }
      }
      out.kkt_gap = gap;
      if (gap <= kkt_target) return out;
    }

    for (int i = 0; i < n; ++i)
      for (int a = 0; a < m; ++a) {
        const std::size_t k = static_cast<std::size_t>(i) * m + a;
        bids[k] = inst.util(i, a) * x[k] / u[i];
      }
  }
  throw numerical_error("fractional_mnw: iteration budget exhausted");
}

Allocation round_fractional(const FractionalAllocation& x) {
  if (x.n <= 0 || x.m <= 0)
    throw std::invalid_argument("round_fractional: empty allocation");
  Allocation alloc;
  alloc.n = x.n;
  alloc.owners.resize(x.m);
  for (int a = 0; a < x.m; ++a) {
    int best = 0;
    double bv = x.share(0, a);
    for (int i = 1; i < x.n; ++i)
      if (x.share(i, a) > bv) {
        bv = x.share(i, a);
        best = i;
      }
    alloc.owners[a] = best;
  }
  return alloc;
}

}  // namespace fairdiv
