#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "fairdiv/probability.hpp"
#include "support.hpp"

using fairdiv::AgentProfile;
using fairdiv::MultiplierVector;
using fairdiv::ProbabilityVector;
using fairdiv::UtilityDistribution;

namespace {

AgentProfile iid_uniform(int n) {
  AgentProfile prof;
  prof.name = "iid-uniform";
  for (int i = 0; i < n; ++i)
    prof.agents.push_back(UtilityDistribution::uniform(0.0, 1.0));
  return prof;
}

}  // namespace

TEST_CASE("identical agents split the win probability evenly") {
  for (int n : {2, 3, 5}) {
    const auto probs = fairdiv::resulting_probabilities(
        iid_uniform(n), MultiplierVector(n, 1.0));
    for (double p : probs) CHECK(p == doctest::Approx(1.0 / n).epsilon(1e-6));
  }
}

TEST_CASE("unit multipliers are equalizing on the gap counterexample") {
  const auto prof = fairdiv::builtin_profile("gap-counterexample");
  const auto probs = fairdiv::resulting_probabilities(prof, {1.0, 1.0});
  CHECK(probs[0] == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(probs[1] == doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("quadrature agrees with a 2-D Riemann oracle") {
  const auto prof = iid_uniform(2);
  const auto probs = fairdiv::resulting_probabilities(prof, {2.0, 1.0});
  const double riemann = testsupport::riemann_win_probability(
      prof.agents[0], prof.agents[1], 2.0, 1.0, 2000);
  CHECK(probs[0] == doctest::Approx(riemann).epsilon(1e-4));
  CHECK(probs[0] == doctest::Approx(0.75).epsilon(1e-8));

  // Same cross-check on a kinked profile.
  const auto rr = fairdiv::builtin_profile("rr-po-counterexample");
  const auto rr_probs = fairdiv::resulting_probabilities(rr, {1.0, 1.3});
  const double rr_riemann = testsupport::riemann_win_probability(
      rr.agents[0], rr.agents[1], 1.0, 1.3, 2000);
  CHECK(rr_probs[0] == doctest::Approx(rr_riemann).epsilon(1e-3));
}

TEST_CASE("probabilities sum to one across random profiles and multipliers") {
  fairdiv::RandomSource rng(99);
  for (int rep = 0; rep < 100; ++rep) {
    const int n = 2 + static_cast<int>(rng.uniform_int(0, 3));
    const auto prof = testsupport::random_bounded_profile(1000 + rep, n);
    MultiplierVector beta(n);
    for (auto& b : beta) b = std::exp(rng.uniform(-1.0, 1.0));
    const auto probs = fairdiv::resulting_probabilities(prof, beta);
    double sum = 0.0;
    for (double p : probs) {
      CHECK(p >= 0.0);
      CHECK(p <= 1.0);
      sum += p;
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-6));
  }
}

TEST_CASE("scale invariance of resulting probabilities") {
  const auto prof = testsupport::random_bounded_profile(5, 4);
  MultiplierVector beta = {1.0, 1.7, 0.45, 3.1};
  const auto base = fairdiv::resulting_probabilities(prof, beta);
  for (double c : {1e-3, 0.37, 1e3}) {
    MultiplierVector scaled = beta;
    for (auto& b : scaled) b *= c;
    const auto probs = fairdiv::resulting_probabilities(prof, scaled);
    for (int i = 0; i < 4; ++i)
      CHECK(probs[i] == doctest::Approx(base[i]).epsilon(1e-9));
  }
}

TEST_CASE("monte carlo estimator: symmetry, single agent, quad agreement") {
  fairdiv::RandomSource rng(4242);
  const auto prof = iid_uniform(4);
  const auto mc = fairdiv::resulting_probabilities_mc(
      prof, MultiplierVector(4, 1.0), 1000000, rng);
  for (double p : mc) CHECK(p == doctest::Approx(0.25).epsilon(0.012));

  const auto single = fairdiv::resulting_probabilities_mc(
      iid_uniform(1), {1.0}, 10, rng);
  CHECK(single[0] == 1.0);

  const double stderr4 = 4.0 * std::sqrt(0.25 / 1000000.0);
  for (const char* name : {"peak10", "beta5", "gap-counterexample",
                           "percentile-counterexample"}) {
    const auto profile = fairdiv::builtin_profile(name);
    MultiplierVector beta(profile.size());
    for (std::size_t i = 0; i < beta.size(); ++i) beta[i] = 1.0 + 0.07 * i;
    const auto quad = fairdiv::resulting_probabilities(profile, beta);
    const auto sampled =
        fairdiv::resulting_probabilities_mc(profile, beta, 1000000, rng);
    for (int i = 0; i < profile.size(); ++i)
      CHECK(std::abs(quad[i] - sampled[i]) <= stderr4);
  }
}

TEST_CASE("local monotonicity: raising the max-ratio agent helps them") {
  fairdiv::RandomSource rng(321);
  for (int rep = 0; rep < 20; ++rep) {
    const int n = 2 + static_cast<int>(rng.uniform_int(0, 2));
    const auto prof = testsupport::random_bounded_profile(2000 + rep, n);
    MultiplierVector beta(n), raised(n);
    int argmax = 0;
    double best_ratio = 0.0;
    for (int i = 0; i < n; ++i) {
      beta[i] = std::exp(rng.uniform(-0.5, 0.5));
      const double ratio = std::exp(rng.uniform(0.0, 0.4));
      raised[i] = beta[i] * ratio;
      if (ratio > best_ratio) {
        best_ratio = ratio;
        argmax = i;
      }
    }
    const auto before = fairdiv::resulting_probabilities(prof, beta);
    const auto after = fairdiv::resulting_probabilities(prof, raised);
    CHECK(after[argmax] >= before[argmax] - 1e-7);
  }
}

TEST_CASE("bounded change: one step moves a probability by at most 2q eps") {
  fairdiv::RandomSource rng(654);
  for (double eps : {0.001, 0.01, 0.1}) {
    for (int rep = 0; rep < 10; ++rep) {
      const int n = 2 + static_cast<int>(rng.uniform_int(0, 2));
      const auto prof = testsupport::random_bounded_profile(3000 + rep, n);
      const double q = prof.density_bounds()->upper;
      MultiplierVector beta(n);
      for (auto& b : beta) b = std::exp(rng.uniform(-0.5, 0.5));
      const auto before = fairdiv::resulting_probabilities(prof, beta);
      const int i = static_cast<int>(rng.uniform_int(0, n - 1));
      MultiplierVector stepped = beta;
      stepped[i] *= 1.0 + eps;
      const auto after = fairdiv::resulting_probabilities(prof, stepped);
      CHECK(after[i] >= before[i] - 1e-7);
      CHECK(after[i] <= before[i] + 2.0 * q * eps + 1e-7);
    }
  }
}

TEST_CASE("2q multiplier ratio forces a strict probability ordering") {
  fairdiv::RandomSource rng(987);
  for (int rep = 0; rep < 50; ++rep) {
    const int n = 2 + static_cast<int>(rng.uniform_int(0, 2));
    const auto prof = testsupport::random_bounded_profile(4000 + rep, n);
    const double q = prof.density_bounds()->upper;
    MultiplierVector beta(n);
    for (auto& b : beta) b = std::exp(rng.uniform(-0.2, 0.2));
    const int i = static_cast<int>(rng.uniform_int(0, n - 1));
    int j = static_cast<int>(rng.uniform_int(0, n - 2));
    if (j >= i) ++j;
    beta[i] = beta[j] * 2.0 * q;
    const auto probs = fairdiv::resulting_probabilities(prof, beta);
    CHECK(probs[i] > probs[j]);
  }
}

TEST_CASE("conditional expectation: winning among iid uniforms") {
  const auto prof = iid_uniform(2);
  const double e = fairdiv::expected_utility_given_win(prof, {1.0, 1.0}, 0);
  CHECK(e == doctest::Approx(2.0 / 3.0).epsilon(1e-4));
}

TEST_CASE("conditional expectation: an uninformative condition") {
  // Agent B's scaled values always exceed agent A's, so conditioning on B
  // winning tells us nothing about A.
  AgentProfile prof;
  prof.name = "separated";
  prof.agents.push_back(UtilityDistribution::uniform(0.0, 0.2));
  prof.agents.push_back(UtilityDistribution::uniform(0.8, 1.0));
  const double e =
      fairdiv::expected_utility_given_other_wins(prof, {1.0, 1.0}, 0, 1);
  CHECK(e == doctest::Approx(0.1).epsilon(1e-4));
}

TEST_CASE("gap counterexample: winning is uninformative for agent A") {
  const auto prof = fairdiv::builtin_profile("gap-counterexample");
  const double own = fairdiv::expected_utility_given_win(prof, {1.0, 1.0}, 0);
  const double other =
      fairdiv::expected_utility_given_other_wins(prof, {1.0, 1.0}, 0, 1);
  CHECK(own == doctest::Approx(0.5).epsilon(1e-4));
  CHECK(other == doctest::Approx(0.5).epsilon(1e-4));
}

TEST_CASE("conditional expectations match monte carlo on peak10") {
  const auto prof = fairdiv::builtin_profile("peak10");
  // A lightly uneven multiplier vector; exact equalization not needed for
  // the estimator cross-check.
  MultiplierVector beta(10);
  for (int i = 0; i < 10; ++i) beta[i] = 1.0 + 0.05 * i;

  fairdiv::RandomSource rng(555);
  const auto own = testsupport::mc_conditional_mean(prof, beta, 0, 0,
                                                    1000000, rng);
  const double own_quad =
      fairdiv::expected_utility_given_win(prof, beta, 0);
  CHECK(own_quad == doctest::Approx(own.mean).epsilon(0.005));

  const auto cross = testsupport::mc_conditional_mean(prof, beta, 0, 5,
                                                      1000000, rng);
  const double cross_quad =
      fairdiv::expected_utility_given_other_wins(prof, beta, 0, 5);
  CHECK(cross_quad == doctest::Approx(cross.mean).epsilon(0.005));
}

TEST_CASE("expectation inequalities on random profiles") {
  fairdiv::RandomSource rng(777);
  for (int rep = 0; rep < 8; ++rep) {
    const int n = 2 + static_cast<int>(rng.uniform_int(0, 3));
    const auto prof = testsupport::random_bounded_profile(5000 + rep, n);
    MultiplierVector beta(n);
    for (auto& b : beta) b = std::exp(rng.uniform(-0.3, 0.3));
    for (int i = 0; i < n; ++i) {
      const double unconditional = prof.agents[i].mean();
      for (int j = 0; j < n; ++j) {
        if (i == j) continue;
        const double cond =
            fairdiv::expected_utility_given_other_wins(prof, beta, i, j);
        CHECK(cond <= unconditional + 1e-4);

        // Winning the full contest is at least as selective as beating
        // agent j alone.
        AgentProfile pair;
        pair.name = "pair";
        pair.agents = {prof.agents[i], prof.agents[j]};
        const double pairwise = fairdiv::expected_utility_given_win(
            pair, {beta[i], beta[j]}, 0);
        const double full =
            fairdiv::expected_utility_given_win(prof, beta, i);
        CHECK(full >= pairwise - 1e-4);
      }
    }
  }
}

TEST_CASE("gap constant closed form and monotonicity") {
  CHECK(fairdiv::gap_constant(1.0, 1.0) ==
        doctest::Approx(1.0 / 1048576.0).epsilon(1e-12));

  // Assembled from the intermediate constants rather than the final formula.
  const double L = 1.0 / (16.0 * 1.9 * 1.9);
  const double D = 0.1 / (4.0 * 1.9);
  const double G = 0.1 * L * L * D / 16.0;
  const double expected = L * G / 4.0;
  CHECK(fairdiv::gap_constant(0.1, 1.9) ==
        doctest::Approx(expected).epsilon(1e-12));
  CHECK(fairdiv::gap_constant(0.1, 1.9) > 1.0e-10);
  CHECK(fairdiv::gap_constant(0.1, 1.9) < 1.1e-10);

  const auto parts = fairdiv::gap_constants(0.1, 1.9);
  CHECK(parts.overlap_floor == doctest::Approx(L));
  CHECK(parts.slope_floor == doctest::Approx(D));
  CHECK(parts.tail_floor == doctest::Approx(G));
  CHECK(parts.gap == doctest::Approx(expected));

  double prev = 0.0;
  for (double p : {0.1, 0.3, 0.5, 0.9}) {
    const double c = fairdiv::gap_constant(p, 1.9);
    CHECK(c > prev);
    prev = c;
  }
  prev = 1.0;
  for (double q : {1.0, 1.3, 1.9, 3.0}) {
    const double c = fairdiv::gap_constant(1.0, q);
    CHECK(c < prev);
    prev = c;
  }

  CHECK_THROWS_AS(fairdiv::gap_constant(0.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(fairdiv::gap_constant(-1.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(fairdiv::gap_constant(2.0, 1.0), std::domain_error);
}

TEST_CASE("oracle bookkeeping and determinism") {
  const auto prof = iid_uniform(3);
  fairdiv::ProbabilityOracle oracle(prof);
  CHECK(oracle.query_count() == 0);
  oracle({1.0, 1.0, 1.0});
  oracle({1.0, 2.0, 1.0});
  CHECK(oracle.query_count() == 6);
  CHECK_FALSE(oracle.monte_carlo());

  fairdiv::ProbabilityOracle mc1(prof,
                                 fairdiv::ProbabilityOracle::McConfig{100000,
                                                                      42});
  fairdiv::ProbabilityOracle mc2(prof,
                                 fairdiv::ProbabilityOracle::McConfig{100000,
                                                                      42});
  const auto a = mc1({1.0, 1.5, 0.8});
  const auto b = mc2({1.0, 1.5, 0.8});
  CHECK(mc1.monte_carlo());
  for (int i = 0; i < 3; ++i) CHECK(a[i] == b[i]);
}

TEST_CASE("degenerate win probabilities are rejected") {
  AgentProfile prof;
  prof.name = "separated";
  prof.agents.push_back(UtilityDistribution::uniform(0.0, 0.2));
  prof.agents.push_back(UtilityDistribution::uniform(0.8, 1.0));
  // Agent 0 never wins at equal multipliers.
  CHECK_THROWS_AS(
      fairdiv::expected_utility_given_win(prof, {1.0, 1.0}, 0),
      std::domain_error);
}
