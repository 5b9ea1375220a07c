#include "fairdiv/fairness.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace fairdiv {

double EnvyMatrix::max_envy() const {
  double worst = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j) worst = std::max(worst, envy(i, j));
  return worst;
}

namespace {

void check(const Instance& inst, const Allocation& alloc) {
  inst.validate();
  if (alloc.n != inst.n ||
      static_cast<int>(alloc.owners.size()) != inst.m)
    throw std::invalid_argument("allocation does not match instance");
  for (int o : alloc.owners)
    if (o < 0 || o >= inst.n)
      throw std::invalid_argument("allocation: owner out of range");
}

}  // namespace

EnvyMatrix envy_matrix(const Instance& inst, const Allocation& alloc) {
  check(inst, alloc);
  EnvyMatrix e;
  e.n = inst.n;
  e.value.assign(static_cast<std::size_t>(inst.n) * inst.n, 0.0);
  for (int a = 0; a < inst.m; ++a) {
    const int j = alloc.owners[a];
    for (int i = 0; i < inst.n; ++i)
      e.value[static_cast<std::size_t>(i) * inst.n + j] += inst.util(i, a);
  }
  return e;
}

bool is_envy_free(const Instance& inst, const Allocation& alloc) {
  const EnvyMatrix e = envy_matrix(inst, alloc);
  for (int i = 0; i < e.n; ++i)
    for (int j = 0; j < e.n; ++j)
      if (i != j && e.envy(i, j) > 0.0) return false;
  return true;
}

bool is_ef1(const Instance& inst, const Allocation& alloc) {
  const EnvyMatrix e = envy_matrix(inst, alloc);
  // best[i][j]: i's most valued item inside j's bundle.
  std::vector<double> best(static_cast<std::size_t>(inst.n) * inst.n, 0.0);
  for (int a = 0; a < inst.m; ++a) {
    const int j = alloc.owners[a];
    for (int i = 0; i < inst.n; ++i) {
      auto& b = best[static_cast<std::size_t>(i) * inst.n + j];
      b = std::max(b, inst.util(i, a));
    }
  }
  for (int i = 0; i < inst.n; ++i)
    for (int j = 0; j < inst.n; ++j) {
      if (i == j) continue;
      if (e.envy(i, j) > best[static_cast<std::size_t>(i) * inst.n + j])
        return false;
    }
  return true;
}

bool fpo_certificate_check(const Instance& inst, const Allocation& alloc,
                           const MultiplierVector& weights, double tolerance) {
  check(inst, alloc);
  if (static_cast<int>(weights.size()) != inst.n)
    throw std::invalid_argument("weight count != agent count");
  for (double w : weights)
    if (!(w > 0.0) || !std::isfinite(w))
      throw std::invalid_argument("weights must be positive and finite");
  for (int a = 0; a < inst.m; ++a) {
    double best = 0.0;
    for (int i = 0; i < inst.n; ++i)
      best = std::max(best, weights[i] * inst.util(i, a));
    const double own = weights[alloc.owners[a]] * inst.util(alloc.owners[a], a);
    if (own < best * (1.0 - tolerance)) return false;
  }
  return true;
}

namespace {

struct PairItem {
  int item;
  double ui, uj;  // the two agents' values under the pair being scanned
};

ParetoImprovement make_improvement(int n,
                                   std::vector<std::pair<int, int>> moves,
                                   const Instance& inst,
                                   const Allocation& alloc) {
  ParetoImprovement imp;
  imp.moves = std::move(moves);
  imp.deltas.assign(n, 0.0);
  for (const auto& [item, to] : imp.moves) {
    imp.deltas[alloc.owners[item]] -= inst.util(alloc.owners[item], item);
    imp.deltas[to] += inst.util(to, item);
  }
  return imp;
}

// One-for-one swaps between bundles ai (agent i) and aj (agent j): find
// alpha in ai, gamma in aj with u_i(gamma) >= u_i(alpha),
// u_j(alpha) >= u_j(gamma), one inequality strict.
std::optional<std::pair<int, int>> find_swap(std::vector<PairItem>& ai,
                                             std::vector<PairItem>& aj) {
  if (ai.empty() || aj.empty()) return std::nullopt;
  // Scan aj in order of decreasing u_i; track the running min of u_j and
  // where it occurs, so "some gamma with u_i(gamma) >= t and small u_j"
  // becomes a prefix lookup.
  std::sort(aj.begin(), aj.end(),
            [](const PairItem& x, const PairItem& y) { return x.ui > y.ui; });
  const int k = static_cast<int>(aj.size());
  std::vector<double> runmin(k);
  std::vector<int> argmin(k);
  for (int t = 0; t < k; ++t) {
    if (t == 0 || aj[t].uj < runmin[t - 1]) {
      runmin[t] = aj[t].uj;
      argmin[t] = t;
    } else {
      runmin[t] = runmin[t - 1];
      argmin[t] = argmin[t - 1];
    }
  }
  auto prefix_end = [&](double threshold, bool strict) {
    // Number of leading entries with ui >= threshold (or > when strict).
    int lo = 0, hi = k;
    while (lo < hi) {
      const int mid = (lo + hi) / 2;
      const bool in = strict ? aj[mid].ui > threshold : aj[mid].ui >= threshold;
      if (in)
        lo = mid + 1;
      else
        hi = mid;
    }
    return lo;
  };
  for (const auto& a : ai) {
    // (a) gamma at least as good for i, strictly cheaper for j
    int end = prefix_end(a.ui, false);
    if (end > 0 && runmin[end - 1] < a.uj)
      return std::make_pair(a.item, aj[argmin[end - 1]].item);
    // (b) gamma strictly better for i, at most as expensive for j
    end = prefix_end(a.ui, true);
    if (end > 0 && runmin[end - 1] <= a.uj)
      return std::make_pair(a.item, aj[argmin[end - 1]].item);
  }
  return std::nullopt;
}

// Two-for-one trades: agent j cedes {g1, g2} from its bundle and receives
// alpha from agent i's bundle. Conditions: u_j(alpha) >= u_j(g1) + u_j(g2)
// and u_i(g1) + u_i(g2) >= u_i(alpha), one strict. Returns (alpha, g1, g2).
std::optional<std::array<int, 3>> find_two_for_one(std::vector<PairItem>& ai,
                                                   std::vector<PairItem>& aj) {
  if (ai.empty() || aj.size() < 2) return std::nullopt;
  // ai sorted by decreasing u_j with running min of u_i over prefixes.
  std::sort(ai.begin(), ai.end(),
            [](const PairItem& x, const PairItem& y) { return x.uj > y.uj; });
  const int k = static_cast<int>(ai.size());
  std::vector<double> runmin(k);
  std::vector<int> argmin(k);
  for (int t = 0; t < k; ++t) {
    if (t == 0 || ai[t].ui < runmin[t - 1]) {
      runmin[t] = ai[t].ui;
      argmin[t] = t;
    } else {
      runmin[t] = runmin[t - 1];
      argmin[t] = argmin[t - 1];
    }
  }
  const double max_uj = ai[0].uj;
  // Candidate pairs in increasing order of what they cost agent j.
  std::sort(aj.begin(), aj.end(),
            [](const PairItem& x, const PairItem& y) { return x.uj < y.uj; });
  const int kj = static_cast<int>(aj.size());
  auto prefix_end = [&](double threshold) {
    // Leading entries of ai with uj >= threshold.
    int lo = 0, hi = k;
    while (lo < hi) {
      const int mid = (lo + hi) / 2;
      if (ai[mid].uj >= threshold)
        lo = mid + 1;
      else
        hi = mid;
    }
    return lo;
  };
  for (int p = 0; p < kj - 1; ++p) {
    if (aj[p].uj + aj[p + 1].uj > max_uj) break;
    for (int r = p + 1; r < kj; ++r) {
      const double sj = aj[p].uj + aj[r].uj;
      if (sj > max_uj) break;
      const double si = aj[p].ui + aj[r].ui;
      const int end = prefix_end(sj);
      if (end == 0) continue;
      if (runmin[end - 1] > si) continue;
      const int cand = argmin[end - 1];
      if (runmin[end - 1] < si || ai[cand].uj > sj)
        return std::array<int, 3>{ai[cand].item, aj[p].item, aj[r].item};
      // Degenerate tie at the running min; look for any strict witness.
      for (int t = 0; t < end; ++t)
        if (ai[t].ui <= si && (ai[t].ui < si || ai[t].uj > sj))
          return std::array<int, 3>{ai[t].item, aj[p].item, aj[r].item};
    }
  }
  return std::nullopt;
}

std::vector<PairItem> pair_view(const Instance& inst,
                                const std::vector<int>& bundle, int i, int j) {
  std::vector<PairItem> v;
  v.reserve(bundle.size());
  for (int a : bundle) v.push_back({a, inst.util(i, a), inst.util(j, a)});
  return v;
}

// Two-for-two trades reduce to the swap search over two-item combinations:
// treat each unordered pair {a, b} of a bundle as one pseudo-item whose
// values are the pair sums. Quadratic in bundle size in both time and
// memory, so this runs last, after the cheaper move classes have failed.
struct PairSumView {
  std::vector<PairItem> sums;                // item = index into `pairs`
  std::vector<std::pair<int, int>> pairs;    // real item ids
};

PairSumView pair_sum_view(const std::vector<PairItem>& bundle) {
  PairSumView v;
  const int k = static_cast<int>(bundle.size());
  if (k < 2) return v;
  v.pairs.reserve(static_cast<std::size_t>(k) * (k - 1) / 2);
  v.sums.reserve(v.pairs.capacity());
  for (int x = 0; x < k; ++x)
    for (int y = x + 1; y < k; ++y) {
      v.sums.push_back({static_cast<int>(v.pairs.size()),
                        bundle[x].ui + bundle[y].ui,
                        bundle[x].uj + bundle[y].uj});
      v.pairs.emplace_back(bundle[x].item, bundle[y].item);
    }
  return v;
}

std::optional<std::array<int, 4>> find_two_for_two(
    const std::vector<PairItem>& ai, const std::vector<PairItem>& aj) {
  PairSumView pi = pair_sum_view(ai);
  PairSumView pj = pair_sum_view(aj);
  if (pi.sums.empty() || pj.sums.empty()) return std::nullopt;
  const auto sw = find_swap(pi.sums, pj.sums);
  if (!sw) return std::nullopt;
  const auto [a, b] = pi.pairs[sw->first];
  const auto [c, d] = pj.pairs[sw->second];
  return std::array<int, 4>{a, b, c, d};
}

}  // namespace

std::optional<ParetoImprovement> find_pareto_improvement(
    const Instance& inst, const Allocation& alloc, int depth) {
  check(inst, alloc);
  if (depth < 1)
    throw std::invalid_argument("find_pareto_improvement: depth must be >= 1");
  const int n = inst.n;

  // Free transfers: an item worthless to its owner but valued elsewhere.
  for (int a = 0; a < inst.m; ++a) {
    const int i = alloc.owners[a];
    if (inst.util(i, a) != 0.0) continue;
    for (int j = 0; j < n; ++j)
      if (j != i && inst.util(j, a) > 0.0)
        return make_improvement(n, {{a, j}}, inst, alloc);
  }

  const auto bundles = alloc.bundles();

  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      auto ai = pair_view(inst, bundles[i], i, j);
      auto aj = pair_view(inst, bundles[j], i, j);
      if (const auto sw = find_swap(ai, aj))
        return make_improvement(
            n, {{sw->first, j}, {sw->second, i}}, inst, alloc);
    }

  if (depth >= 2) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        if (i == j) continue;
        auto ai = pair_view(inst, bundles[i], i, j);
        auto aj = pair_view(inst, bundles[j], i, j);
        if (const auto tr = find_two_for_one(ai, aj))
          return make_improvement(
              n, {{(*tr)[0], j}, {(*tr)[1], i}, {(*tr)[2], i}}, inst, alloc);
      }
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        const auto ai = pair_view(inst, bundles[i], i, j);
        const auto aj = pair_view(inst, bundles[j], i, j);
        if (const auto tr = find_two_for_two(ai, aj))
          return make_improvement(n,
                                  {{(*tr)[0], j},
                                   {(*tr)[1], j},
                                   {(*tr)[2], i},
                                   {(*tr)[3], i}},
                                  inst, alloc);
      }
  }
  return std::nullopt;
}

bool is_pareto_optimal_bruteforce(const Instance& inst,
                                  const Allocation& alloc) {
  check(inst, alloc);
  if (inst.m * std::log2(std::max(inst.n, 2)) > 22.0)
    throw std::invalid_argument(
        "is_pareto_optimal_bruteforce: instance too large for exhaustive "
        "enumeration");
  const std::vector<double> base = alloc.bundle_utilities(inst);
  std::vector<int> owners(inst.m, 0);
  std::vector<double> u(inst.n);
  for (;;) {
    std::fill(u.begin(), u.end(), 0.0);
    for (int a = 0; a < inst.m; ++a) u[owners[a]] += inst.util(owners[a], a);
    bool geq = true, strict = false;
    for (int i = 0; i < inst.n && geq; ++i) {
      if (u[i] < base[i]) geq = false;
      if (u[i] > base[i]) strict = true;
    }
    if (geq && strict) return false;
    int a = 0;
    while (a < inst.m && ++owners[a] == inst.n) owners[a++] = 0;
    if (a == inst.m) break;
  }
  return true;
}

}  // namespace fairdiv
