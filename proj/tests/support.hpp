// Shared helpers for the test binaries: independent numerical oracles that
// do not reuse the library's quadrature, plus small statistics utilities.
#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "fairdiv/distribution.hpp"
#include "fairdiv/profile.hpp"
#include "fairdiv/random.hpp"

namespace testsupport {

// Composite-trapezoid integral, deliberately naive.
inline double trapezoid(const std::function<double(double)>& f, double lo,
                        double hi, int steps) {
  if (hi <= lo) return 0.0;
  const double h = (hi - lo) / steps;
  double sum = 0.5 * (f(lo) + f(hi));
  for (int k = 1; k < steps; ++k) sum += f(lo + k * h);
  return sum * h;
}

// Two-agent win probability for agent A by midpoint Riemann sum over the
// unit square of density values: an oracle for the quadrature path.
inline double riemann_win_probability(const fairdiv::UtilityDistribution& a,
                                      const fairdiv::UtilityDistribution& b,
                                      double beta_a, double beta_b,
                                      int resolution) {
  const double h = 1.0 / resolution;
  double total = 0.0;
  for (int i = 0; i < resolution; ++i) {
    const double u = (i + 0.5) * h;
    const double fa = a.pdf(u);
    if (fa == 0.0) continue;
    double inner = 0.0;
    for (int j = 0; j < resolution; ++j) {
      const double v = (j + 0.5) * h;
      if (beta_a * u > beta_b * v) inner += b.pdf(v);
    }
    total += fa * inner;
  }
  return total * h * h;
}

// Kolmogorov-Smirnov distance between a sample and the uniform law on
// [0, 1] (pass cdf-transformed samples).
inline double ks_uniform(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  const double n = static_cast<double>(values.size());
  double d = 0.0;
  for (std::size_t k = 0; k < values.size(); ++k) {
    const double lo = k / n;
    const double hi = (k + 1) / n;
    d = std::max(d, std::max(std::abs(values[k] - lo),
                             std::abs(values[k] - hi)));
  }
  return d;
}

// Monte-Carlo estimate of E[u_i | agent `winner` takes the item] under the
// scaled-argmax rule, ties to the lowest index.
struct ConditionalMeans {
  double mean = 0.0;
  std::uint64_t wins = 0;
};

inline ConditionalMeans mc_conditional_mean(const fairdiv::AgentProfile& prof,
                                            const std::vector<double>& beta,
                                            int i, int winner,
                                            std::uint64_t samples,
                                            fairdiv::RandomSource& rng) {
  const int n = prof.size();
  std::vector<double> u(n);
  ConditionalMeans out;
  double sum = 0.0;
  for (std::uint64_t s = 0; s < samples; ++s) {
    int best = 0;
    double best_val = -1.0;
    for (int k = 0; k < n; ++k) {
      u[k] = prof.agents[k].sample(rng);
      const double scaled = beta[k] * u[k];
      if (scaled > best_val) {
        best_val = scaled;
        best = k;
      }
    }
    if (best == winner) {
      ++out.wins;
      sum += u[i];
    }
  }
  if (out.wins > 0) out.mean = sum / out.wins;
  return out;
}

// Small deterministic generator of random density-bounded profiles made of
// peak and uniform agents (q <= 1.9 and p >= 0.1 throughout).
inline fairdiv::AgentProfile random_bounded_profile(std::uint64_t seed,
                                                    int n_agents) {
  fairdiv::RandomSource rng(seed);
  fairdiv::AgentProfile prof;
  prof.name = "random-bounded";
  for (int i = 0; i < n_agents; ++i) {
    if (rng.u01() < 0.5) {
      prof.agents.push_back(
          fairdiv::UtilityDistribution::peak(rng.uniform(0.05, 0.95)));
    } else {
      prof.agents.push_back(fairdiv::UtilityDistribution::uniform(0.0, 1.0));
    }
  }
  return prof;
}

}  // namespace testsupport
