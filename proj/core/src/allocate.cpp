#include "fairdiv/allocate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace fairdiv {

std::vector<std::vector<int>> Allocation::bundles() const {
  std::vector<std::vector<int>> b(n);
  for (int a = 0; a < static_cast<int>(owners.size()); ++a)
    b[owners[a]].push_back(a);
  return b;
}

std::vector<double> Allocation::bundle_utilities(const Instance& inst) const {
  std::vector<double> u(n, 0.0);
  for (int a = 0; a < inst.m; ++a) u[owners[a]] += inst.util(owners[a], a);
  return u;
}

nlohmann::json Allocation::to_json() const {
  return {{"agents", n}, {"owners", owners}};
}

Allocation Allocation::from_json(const nlohmann::json& j) {
  Allocation alloc;
  alloc.n = j.at("agents").get<int>();
  alloc.owners = j.at("owners").get<std::vector<int>>();
  if (alloc.n <= 0) throw std::invalid_argument("allocation: agents <= 0");
  for (int o : alloc.owners)
    if (o < 0 || o >= alloc.n)
      throw std::invalid_argument("allocation: owner out of range");
  return alloc;
}

namespace {

void check_instance(const Instance& inst) { inst.validate(); }

Allocation scaled_argmax(const Instance& inst, const MultiplierVector& beta) {
  Allocation alloc;
  alloc.n = inst.n;
  alloc.owners.resize(inst.m);
  for (int a = 0; a < inst.m; ++a) {
    int best = 0;
    double bv = beta[0] * inst.util(0, a);
    for (int i = 1; i < inst.n; ++i) {
      const double v = beta[i] * inst.util(i, a);
      if (v > bv) {
        bv = v;
        best = i;
      }
    }
    alloc.owners[a] = best;
  }
  return alloc;
}

}  // namespace

Allocation multiplier_allocation(const Instance& inst,
                                 const MultiplierVector& beta) {
  check_instance(inst);
  if (static_cast<int>(beta.size()) != inst.n)
    throw std::invalid_argument("multiplier count != agent count");
  for (double b : beta)
    if (!(b > 0.0) || !std::isfinite(b))
      throw std::invalid_argument("multipliers must be positive and finite");
  return scaled_argmax(inst, beta);
}

Allocation welfare_max_allocation(const Instance& inst) {
  check_instance(inst);
  return scaled_argmax(inst, MultiplierVector(inst.n, 1.0));
}

Allocation round_robin(const Instance& inst) {
  check_instance(inst);
  Allocation alloc;
  alloc.n = inst.n;
  alloc.owners.assign(inst.m, -1);
  std::vector<bool> taken(inst.m, false);
  int remaining = inst.m;
  for (int turn = 0; remaining > 0; ++turn) {
    const int agent = turn % inst.n;
    int best = -1;
    double bv = -1.0;
    for (int a = 0; a < inst.m; ++a)
      if (!taken[a] && inst.util(agent, a) > bv) {
        bv = inst.util(agent, a);
        best = a;
      }
    taken[best] = true;
    alloc.owners[best] = agent;
    --remaining;
  }
  return alloc;
}

Allocation max_percentile_allocation(const Instance& inst,
                                     const AgentProfile& profile) {
  check_instance(inst);
  if (profile.size() != inst.n)
    throw std::invalid_argument("profile size != agent count");
  Allocation alloc;
  alloc.n = inst.n;
  alloc.owners.resize(inst.m);
  for (int a = 0; a < inst.m; ++a) {
    int best = 0;
    double bv = profile.agents[0].cdf(inst.util(0, a));
    for (int i = 1; i < inst.n; ++i) {
      const double v = profile.agents[i].cdf(inst.util(i, a));
      if (v > bv) {
        bv = v;
        best = i;
      }
    }
    alloc.owners[a] = best;
  }
  return alloc;
}

Allocation normalizing_multiplier_allocation(const Instance& inst) {
  check_instance(inst);
  MultiplierVector beta(inst.n);
  for (int i = 0; i < inst.n; ++i) {
    double total = 0.0;
    for (int a = 0; a < inst.m; ++a) total += inst.util(i, a);
    if (!(total > 0.0))
      throw std::domain_error(
          "normalizing_multiplier_allocation: an agent values all items at "
          "zero");
    beta[i] = 1.0 / total;
  }
  return scaled_argmax(inst, beta);
}

double nash_welfare(const Instance& inst, const Allocation& alloc) {
  const auto u = alloc.bundle_utilities(inst);
  double logsum = 0.0;
  for (double v : u) {
    if (v <= 0.0) return 0.0;
    logsum += std::log(v);
  }
  return std::exp(logsum / inst.n);
}

BruteforceMnwResult max_nash_welfare_bruteforce(const Instance& inst) {
  check_instance(inst);
  if (inst.n > 3 || inst.m > 10)
    throw std::invalid_argument(
        "max_nash_welfare_bruteforce: exhaustive search is limited to "
        "n <= 3, m <= 10");
  std::vector<int> owners(inst.m, 0);
  std::vector<int> best_owners;
  int best_positive = -1;
  double best_logprod = 0.0;
  std::vector<double> u(inst.n);
  for (;;) {
    std::fill(u.begin(), u.end(), 0.0);
    for (int a = 0; a < inst.m; ++a) u[owners[a]] += inst.util(owners[a], a);
    int positive = 0;
    double logprod = 0.0;
    for (double v : u)
      if (v > 0.0) {
        ++positive;
        logprod += std::log(v);
      }
    if (positive > best_positive ||
        (positive == best_positive && logprod > best_logprod)) {
      best_positive = positive;
      best_logprod = logprod;
      best_owners = owners;
    }
    int a = 0;
    while (a < inst.m && ++owners[a] == inst.n) owners[a++] = 0;
    if (a == inst.m) break;
  }
  BruteforceMnwResult out;
  out.allocation.n = inst.n;
  out.allocation.owners = std::move(best_owners);
  out.nash_welfare = nash_welfare(inst, out.allocation);
  return out;
}

PipelineMultipliers compute_pipeline_multipliers(const AgentProfile& profile,
                                                 const PipelineConfig& cfg) {
  PipelineMultipliers out;
  const int n = profile.size();
  if (n == 0) throw std::invalid_argument("empty profile");

  const auto bounds = profile.density_bounds();
  double p = cfg.p_bound.value_or(bounds ? bounds->lower : 0.0);
  double q = cfg.q_bound.value_or(bounds ? bounds->upper : 0.0);
  if (!(q > 0.0))
    throw std::invalid_argument(
        "pipeline: no density upper bound available; pass q_bound for "
        "profiles without declared bounds");
  if (!profile.interval_support())
    out.warnings.push_back(
        "profile support is not an interval; the conditional-gap guarantee "
        "does not apply");

  if (p > 0.0) out.theoretical_delta = gap_constant(p, q) / (4.0 * n);
  const double cap = 1.0 / (4.0 * n);
  double delta = cfg.delta_floor;
  if (out.theoretical_delta) delta = std::max(delta, *out.theoretical_delta);
  out.delta = std::min(delta, cap);

  SolverConfig scfg = cfg.solver;
  scfg.delta = out.delta;
  scfg.q_bound = q;
  ProbabilityOracle oracle(profile);
  SolverResult res = equalize_annealed(oracle, scfg);
  out.multipliers = normalize_min_one(std::move(res.multipliers));
  out.trace = std::move(res.trace);
  return out;
}

PipelineResult approximate_multiplier_pipeline(const AgentProfile& profile,
                                               const Instance& inst,
                                               const PipelineConfig& cfg) {
  PipelineResult out;
  out.solve = compute_pipeline_multipliers(profile, cfg);
  out.allocation = multiplier_allocation(inst, out.solve.multipliers);
  return out;
}

}  // namespace fairdiv
