#include "fairdiv/probability.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fairdiv {

namespace {

void validate(const AgentProfile& profile, const MultiplierVector& beta) {
  if (profile.size() == 0) throw std::invalid_argument("empty profile");
  if (static_cast<int>(beta.size()) != profile.size())
    throw std::invalid_argument("multiplier count != agent count");
  for (double b : beta)
    if (!(b > 0.0) || !std::isfinite(b))
      throw std::invalid_argument("multipliers must be positive and finite");
}

// Collects the integration cuts for an integrand over agent `base`'s value
// axis in which agent k's cdf appears as F_k(u / r_k): every breakpoint of
// k lands at r_k * breakpoint.
void scaled_breakpoints(const AgentProfile& profile, int base,
                        const std::vector<double>& scale,
                        std::vector<double>& out) {
  out.clear();
  for (double b : profile.agents[base].breakpoints()) out.push_back(b);
  for (int k = 0; k < profile.size(); ++k) {
    if (k == base || scale[k] == 0.0) continue;
    for (double b : profile.agents[k].breakpoints())
      out.push_back(b * scale[k]);
  }
  std::sort(out.begin(), out.end());
}

double win_probability(const AgentProfile& profile,
                       const MultiplierVector& beta, int i,
                       const QuadratureOptions& opts) {
  const auto& di = profile.agents[i];
  const int n = profile.size();
  // Agent j's cdf is evaluated at beta_i u / beta_j; precompute the inverse
  // scale r_j = beta_j / beta_i so arguments read u / r_j.
  std::vector<double> r(n, 0.0);
  double lo = di.support().lo;
  for (int j = 0; j < n; ++j) {
    if (j == i) continue;
    r[j] = beta[j] / beta[i];
    // F_j vanishes until u reaches r_j * support.lo of j.
    lo = std::max(lo, profile.agents[j].support().lo * r[j]);
  }
  const double hi = di.support().hi;
  if (lo >= hi) return 0.0;

  std::vector<double> cuts;
  scaled_breakpoints(profile, i, r, cuts);

  const auto integrand = [&](double u) {
    double v = di.pdf(u);
    for (int j = 0; j < n && v != 0.0; ++j)
      if (j != i) v *= profile.agents[j].cdf(u / r[j]);
    return v;
  };
  return integrate_adaptive(integrand, lo, hi, cuts, opts).value;
}

}  // namespace

MultiplierVector normalize_min_one(MultiplierVector beta) {
  if (beta.empty()) return beta;
  const double mn = *std::min_element(beta.begin(), beta.end());
  if (!(mn > 0.0)) throw std::invalid_argument("multipliers must be positive");
  for (double& b : beta) b /= mn;
  return beta;
}

ProbabilityVector resulting_probabilities(const AgentProfile& profile,
                                          const MultiplierVector& beta,
                                          const QuadratureOptions& opts) {
  validate(profile, beta);
  ProbabilityVector p(profile.size());
  for (int i = 0; i < profile.size(); ++i)
    p[i] = win_probability(profile, beta, i, opts);
  return p;
}

ProbabilityVector resulting_probabilities_mc(const AgentProfile& profile,
                                             const MultiplierVector& beta,
                                             std::uint64_t samples,
                                             RandomSource& rng) {
  validate(profile, beta);
  if (samples == 0) throw std::invalid_argument("samples must be > 0");
  const int n = profile.size();
  std::vector<std::uint64_t> wins(n, 0);
  for (std::uint64_t s = 0; s < samples; ++s) {
    int winner = 0;
    double best = -1.0;
    for (int i = 0; i < n; ++i) {
      const double v = beta[i] * profile.agents[i].sample(rng);
      if (v > best) {
        best = v;
        winner = i;
      }
    }
    ++wins[winner];
  }
  ProbabilityVector p(n);
  for (int i = 0; i < n; ++i)
    p[i] = static_cast<double>(wins[i]) / static_cast<double>(samples);
  return p;
}

double expected_utility_given_win(const AgentProfile& profile,
                                  const MultiplierVector& beta, int i,
                                  const QuadratureOptions& opts) {
  validate(profile, beta);
  if (i < 0 || i >= profile.size()) throw std::invalid_argument("bad agent");
  const double pi = win_probability(profile, beta, i, opts);
  if (pi < 1e-12)
    throw std::domain_error(
        "conditional expectation undefined: win probability is numerically "
        "zero");

  const auto& di = profile.agents[i];
  const int n = profile.size();
  std::vector<double> r(n, 0.0);
  double lo = di.support().lo;
  for (int j = 0; j < n; ++j) {
    if (j == i) continue;
    r[j] = beta[j] / beta[i];
    lo = std::max(lo, profile.agents[j].support().lo * r[j]);
  }
  const double hi = di.support().hi;
  if (lo >= hi)
    throw std::domain_error("conditional expectation undefined: empty region");

  std::vector<double> cuts;
  scaled_breakpoints(profile, i, r, cuts);
  const auto integrand = [&](double u) {
    double v = u * di.pdf(u);
    for (int j = 0; j < n && v != 0.0; ++j)
      if (j != i) v *= profile.agents[j].cdf(u / r[j]);
    return v;
  };
  return integrate_adaptive(integrand, lo, hi, cuts, opts).value / pi;
}

double expected_utility_given_other_wins(const AgentProfile& profile,
                                         const MultiplierVector& beta, int i,
                                         int j,
                                         const QuadratureOptions& opts) {
  validate(profile, beta);
  const int n = profile.size();
  if (i < 0 || i >= n || j < 0 || j >= n || i == j)
    throw std::invalid_argument("bad agent pair");
  const double pj = win_probability(profile, beta, j, opts);
  if (pj < 1e-12)
    throw std::domain_error(
        "conditional expectation undefined: win probability is numerically "
        "zero");

  // Integrate over agent j's winning value v. Conditional on j winning with
  // value v, agent i's value is its distribution truncated to
  // u <= beta_j v / beta_i, whose mean contributes via the exact partial
  // expectation; every other agent k contributes F_k(beta_j v / beta_k).
  const auto& dj = profile.agents[j];
  std::vector<double> r(n, 0.0);
  double lo = dj.support().lo;
  for (int k = 0; k < n; ++k) {
    if (k == j) continue;
    r[k] = beta[k] / beta[j];
    if (k != i) lo = std::max(lo, profile.agents[k].support().lo * r[k]);
  }
  // The partial expectation of i vanishes until beta_j v / beta_i reaches
  // i's support.
  lo = std::max(lo, profile.agents[i].support().lo * r[i]);
  const double hi = dj.support().hi;
  if (lo >= hi)
    throw std::domain_error("conditional expectation undefined: empty region");

  std::vector<double> cuts;
  scaled_breakpoints(profile, j, r, cuts);
  const auto integrand = [&](double v) {
    double w = dj.pdf(v);
    if (w == 0.0) return 0.0;
    w *= profile.agents[i].partial_expectation(v / r[i]);
    for (int k = 0; k < n && w != 0.0; ++k)
      if (k != i && k != j) w *= profile.agents[k].cdf(v / r[k]);
    return w;
  };
  return integrate_adaptive(integrand, lo, hi, cuts, opts).value / pj;
}

GapConstants gap_constants(double p, double q) {
  if (!(p > 0.0) || !(q >= p))
    throw std::domain_error("gap_constants: need 0 < p <= q");
  GapConstants g;
  g.overlap_floor = 1.0 / (16.0 * q * q);
  g.slope_floor = p / (4.0 * q);
  g.tail_floor =
      p * g.overlap_floor * g.overlap_floor * g.slope_floor / 16.0;
  g.gap = g.overlap_floor * g.tail_floor / 4.0;
  return g;
}

double gap_constant(double p, double q) { return gap_constants(p, q).gap; }

ProbabilityOracle::ProbabilityOracle(AgentProfile profile,
                                     QuadratureOptions opts)
    : profile_(std::move(profile)), opts_(opts) {
  if (profile_.size() == 0) throw std::invalid_argument("empty profile");
}

ProbabilityOracle::ProbabilityOracle(AgentProfile profile, McConfig mc)
    : profile_(std::move(profile)), mc_(mc), mc_rng_(RandomSource(mc.seed)) {
  if (profile_.size() == 0) throw std::invalid_argument("empty profile");
  if (mc.samples == 0) throw std::invalid_argument("samples must be > 0");
}

ProbabilityVector ProbabilityOracle::operator()(
    const MultiplierVector& beta) const {
  queries_.fetch_add(profile_.size(), std::memory_order_relaxed);
  if (mc_) {
    std::lock_guard<std::mutex> lock(mc_mutex_);
    return resulting_probabilities_mc(profile_, beta, mc_->samples, *mc_rng_);
  }
  return resulting_probabilities(profile_, beta, opts_);
}

}  // namespace fairdiv
