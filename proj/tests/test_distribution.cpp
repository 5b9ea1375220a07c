#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "fairdiv/distribution.hpp"
#include "fairdiv/profile.hpp"
#include "fairdiv/quadrature.hpp"
#include "support.hpp"

using fairdiv::AgentProfile;
using fairdiv::PiecewiseSegment;
using fairdiv::UtilityDistribution;

namespace {

std::vector<UtilityDistribution> all_builtin_distributions() {
  std::vector<UtilityDistribution> out;
  for (const auto& name : fairdiv::builtin_profile_names())
    for (const auto& d : fairdiv::builtin_profile(name).agents)
      out.push_back(d);
  return out;
}

}  // namespace

TEST_CASE("peak pdf endpoint and peak values") {
  const auto d = UtilityDistribution::peak(1.0 / 11.0);
  CHECK(d.pdf(0.0) == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(d.pdf(1.0 / 11.0) == doctest::Approx(1.9).epsilon(1e-12));
  CHECK(d.pdf(1.0) == doctest::Approx(0.1).epsilon(1e-12));

  const auto mid = UtilityDistribution::peak(0.5);
  CHECK(mid.pdf(0.5) == doctest::Approx(1.9).epsilon(1e-12));
  for (double x = 0.0; x <= 0.5; x += 0.05)
    CHECK(mid.pdf(x) == doctest::Approx(mid.pdf(1.0 - x)).epsilon(1e-12));
}

TEST_CASE("uniform pdf and domain checks") {
  const auto u = UtilityDistribution::uniform(0.0, 1.0);
  CHECK(u.pdf(0.3) == doctest::Approx(1.0));
  const auto half = UtilityDistribution::uniform(0.25, 0.75);
  CHECK(half.pdf(0.5) == doctest::Approx(2.0));
  CHECK(half.pdf(0.1) == 0.0);
  CHECK(half.pdf(0.9) == 0.0);
  CHECK_THROWS_AS(u.pdf(-0.1), std::domain_error);
  CHECK_THROWS_AS(u.pdf(1.1), std::domain_error);
}

TEST_CASE("cdf values, clamping, and monotonicity") {
  const auto u = UtilityDistribution::uniform(0.0, 1.0);
  CHECK(u.cdf(0.25) == doctest::Approx(0.25));

  const auto split = UtilityDistribution::piecewise_uniform(
      {{0.0, 0.25, 0.5}, {0.75, 1.0, 0.5}});
  CHECK(split.cdf(0.5) == doctest::Approx(0.5));

  for (const auto& d : all_builtin_distributions()) {
    CHECK(d.cdf(-0.5) == 0.0);
    CHECK(d.cdf(1.5) == 1.0);
    CHECK(d.cdf(0.0) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(d.cdf(1.0) == doctest::Approx(1.0).epsilon(1e-12));
    double prev = -1.0;
    for (int k = 0; k <= 1000; ++k) {
      const double c = d.cdf(k / 1000.0);
      CHECK(c >= prev - 1e-15);
      prev = c;
    }
  }
}

TEST_CASE("peak cdf matches trapezoid integration of its pdf") {
  for (double a : {1.0 / 11.0, 5.0 / 11.0, 0.5, 10.0 / 11.0}) {
    const auto d = UtilityDistribution::peak(a);
    for (double x : {0.05, 0.2, a, 0.6, 0.95, 1.0}) {
      const double numeric = testsupport::trapezoid(
          [&](double u) { return d.pdf(u); }, 0.0, x, 20000);
      CHECK(d.cdf(x) == doctest::Approx(numeric).epsilon(1e-6));
    }
  }
}

TEST_CASE("piecewise cdf matches trapezoid integration") {
  const auto d = UtilityDistribution::piecewise_uniform(
      {{0.0, 0.25, 0.5}, {0.25, 1.0, 0.5}});
  for (double x : {0.1, 0.25, 0.3, 0.8}) {
    const double numeric = testsupport::trapezoid(
        [&](double u) { return d.pdf(u); }, 0.0, x, 40000);
    CHECK(d.cdf(x) == doctest::Approx(numeric).epsilon(1e-5));
  }
}

TEST_CASE("quantile inverts cdf") {
  std::vector<UtilityDistribution> dists = {
      UtilityDistribution::uniform(0.6, 1.0),
      UtilityDistribution::peak(5.0 / 11.0),
      UtilityDistribution::piecewise_uniform(
          {{0.0, 0.25, 0.5}, {0.75, 1.0, 0.5}}),
      UtilityDistribution::beta(2.0, 2.0),
  };
  for (const auto& d : dists) {
    for (int k = 1; k < 40; ++k) {
      const double u = k / 40.0;
      const double x = d.quantile(u);
      CHECK(d.cdf(x) == doctest::Approx(u).epsilon(1e-9));
    }
  }
  CHECK_THROWS_AS(dists[0].quantile(-0.01), std::domain_error);
  CHECK_THROWS_AS(dists[0].quantile(1.01), std::domain_error);
}

TEST_CASE("means agree with closed forms and numeric integration") {
  for (double a : {1.0 / 11.0, 0.35, 0.5, 0.9}) {
    const auto d = UtilityDistribution::peak(a);
    CHECK(d.mean() == doctest::Approx(0.35 + 0.3 * a).epsilon(1e-12));
    const double numeric = testsupport::trapezoid(
        [&](double u) { return u * d.pdf(u); }, 0.0, 1.0, 20000);
    CHECK(d.mean() == doctest::Approx(numeric).epsilon(1e-6));
  }
  CHECK(UtilityDistribution::beta(5, 1).mean() == doctest::Approx(5.0 / 6.0));
  CHECK(UtilityDistribution::uniform(0.6, 1.0).mean() ==
        doctest::Approx(0.8));
  const auto split = UtilityDistribution::piecewise_uniform(
      {{0.0, 0.25, 0.5}, {0.75, 1.0, 0.5}});
  CHECK(split.mean() == doctest::Approx(0.5 * 0.125 + 0.5 * 0.875));
}

TEST_CASE("partial expectation: boundary values and numeric check") {
  std::vector<UtilityDistribution> dists = {
      UtilityDistribution::uniform(0.25, 0.75),
      UtilityDistribution::peak(0.3),
      UtilityDistribution::piecewise_uniform(
          {{0.0, 0.25, 0.5}, {0.75, 1.0, 0.5}}),
      UtilityDistribution::beta(2.0, 5.0),
  };
  for (const auto& d : dists) {
    CHECK(d.partial_expectation(0.0) == doctest::Approx(0.0));
    CHECK(d.partial_expectation(1.0) == doctest::Approx(d.mean()));
    for (double t : {0.2, 0.5, 0.77}) {
      const double numeric = testsupport::trapezoid(
          [&](double u) { return u * d.pdf(u); }, 0.0, t, 40000);
      CHECK(d.partial_expectation(t) == doctest::Approx(numeric).epsilon(1e-5));
    }
  }
}

TEST_CASE("pdf integrates to one for every builtin distribution") {
  for (const auto& d : all_builtin_distributions()) {
    std::vector<double> cuts(d.breakpoints().begin(), d.breakpoints().end());
    const auto r = fairdiv::integrate_adaptive(
        [&](double x) { return d.pdf(x); }, 0.0, 1.0, cuts, {});
    CHECK(r.value == doctest::Approx(1.0).epsilon(1e-8));
  }
}

TEST_CASE("sampling stays in support and matches the cdf") {
  fairdiv::RandomSource rng(20240811);
  const auto narrow = UtilityDistribution::uniform(0.6, 1.0);
  for (int k = 0; k < 2000; ++k) {
    const double x = narrow.sample(rng);
    CHECK(x >= 0.6);
    CHECK(x <= 1.0);
  }

  std::vector<UtilityDistribution> dists = {
      UtilityDistribution::uniform(0.25, 0.75),
      UtilityDistribution::peak(5.0 / 11.0),
      UtilityDistribution::piecewise_uniform(
          {{0.0, 0.25, 0.5}, {0.25, 1.0, 0.5}}),
      UtilityDistribution::beta(2.0, 2.0),
      UtilityDistribution::beta(0.5, 0.5),
  };
  for (const auto& d : dists) {
    std::vector<double> transformed;
    transformed.reserve(100000);
    for (int k = 0; k < 100000; ++k)
      transformed.push_back(d.cdf(d.sample(rng)));
    CHECK(testsupport::ks_uniform(std::move(transformed)) <= 0.01);
  }
}

TEST_CASE("sample means land near distribution means") {
  fairdiv::RandomSource rng(7);
  const auto peak = UtilityDistribution::peak(5.0 / 11.0);
  double sum = 0.0;
  for (int k = 0; k < 100000; ++k) sum += peak.sample(rng);
  CHECK(sum / 100000 == doctest::Approx(peak.mean()).epsilon(0.01));

  const auto b51 = UtilityDistribution::beta(5, 1);
  sum = 0.0;
  for (int k = 0; k < 100000; ++k) sum += b51.sample(rng);
  CHECK(sum / 100000 == doctest::Approx(5.0 / 6.0).epsilon(0.01));
}

TEST_CASE("density bounds and support length coherence") {
  const auto peak = UtilityDistribution::peak(0.77);
  REQUIRE(peak.density_bounds().has_value());
  CHECK(peak.density_bounds()->lower == doctest::Approx(0.1));
  CHECK(peak.density_bounds()->upper == doctest::Approx(1.9));

  const auto u = UtilityDistribution::uniform(0.25, 0.75);
  REQUIRE(u.density_bounds().has_value());
  CHECK(u.density_bounds()->lower == doctest::Approx(2.0));
  CHECK(u.density_bounds()->upper == doctest::Approx(2.0));

  CHECK_FALSE(UtilityDistribution::beta(2, 2).density_bounds().has_value());
  const auto gapped = UtilityDistribution::piecewise_uniform(
      {{0.0, 0.25, 0.5}, {0.75, 1.0, 0.5}});
  CHECK_FALSE(gapped.density_bounds().has_value());
  CHECK_FALSE(gapped.interval_support());

  for (const auto& d : all_builtin_distributions()) {
    if (!d.density_bounds()) continue;
    const auto b = *d.density_bounds();
    const double len = d.support().length();
    CHECK(len >= 1.0 / b.upper - 1e-12);
    CHECK(len <= 1.0 / b.lower + 1e-12);
    for (int k = 0; k <= 100; ++k) {
      const double x =
          d.support().lo + (d.support().hi - d.support().lo) * k / 100.0;
      const double f = d.pdf(x);
      CHECK(f >= b.lower - 1e-12);
      CHECK(f <= b.upper + 1e-12);
    }
  }
}

TEST_CASE("constructor validation") {
  CHECK_THROWS_AS(UtilityDistribution::peak(0.0), std::invalid_argument);
  CHECK_THROWS_AS(UtilityDistribution::peak(1.0), std::invalid_argument);
  CHECK_THROWS_AS(UtilityDistribution::peak(-0.2), std::invalid_argument);
  CHECK_THROWS_AS(UtilityDistribution::uniform(0.5, 0.5),
                  std::invalid_argument);
  CHECK_THROWS_AS(UtilityDistribution::beta(0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(UtilityDistribution::piecewise_uniform({}),
                  std::invalid_argument);
  CHECK_THROWS_AS(UtilityDistribution::piecewise_uniform(
                      {{0.0, 0.5, 0.5}, {0.4, 1.0, 0.5}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(UtilityDistribution::piecewise_uniform(
                      {{0.0, 0.5, 0.5}, {0.5, 1.0, 0.4}}),
                  std::invalid_argument);
}

TEST_CASE("json round trip preserves behavior") {
  std::vector<UtilityDistribution> dists = {
      UtilityDistribution::uniform(0.6, 1.0),
      UtilityDistribution::peak(3.0 / 11.0),
      UtilityDistribution::piecewise_uniform(
          {{0.0, 0.25, 0.5}, {0.75, 1.0, 0.5}}),
      UtilityDistribution::beta(0.5, 0.5),
  };
  for (const auto& d : dists) {
    const auto back = UtilityDistribution::from_json(d.to_json());
    CHECK(back.kind() == d.kind());
    for (double x : {0.05, 0.3, 0.66, 0.95}) {
      CHECK(back.pdf(x) == doctest::Approx(d.pdf(x)).epsilon(1e-14));
      CHECK(back.cdf(x) == doctest::Approx(d.cdf(x)).epsilon(1e-14));
    }
  }
  CHECK_THROWS_AS(
      UtilityDistribution::from_json({{"kind", "cauchy"}, {"params", {}}}),
      std::invalid_argument);
}

TEST_CASE("builtin profiles match their definitions") {
  CHECK(fairdiv::builtin_profile("peak10").size() == 10);
  const auto peak10 = fairdiv::builtin_profile("peak10");
  for (int i = 0; i < 10; ++i)
    CHECK(peak10.agents[i].peak_location() ==
          doctest::Approx((i + 1) / 11.0));

  CHECK(fairdiv::builtin_profile("beta5").size() == 5);
  CHECK(fairdiv::builtin_profile("iid-peak10").size() == 10);

  const auto rr = fairdiv::builtin_profile("rr-po-counterexample");
  REQUIRE(rr.size() == 2);
  CHECK(rr.agents[0].support().lo == doctest::Approx(0.6));
  CHECK(rr.agents[0].support().hi == doctest::Approx(1.0));
  CHECK(rr.agents[0].pdf(0.8) == doctest::Approx(2.5));
  CHECK(rr.agents[1].pdf(0.8) == doctest::Approx(1.0));

  const auto normalize = fairdiv::builtin_profile("normalize-counterexample");
  REQUIRE(normalize.size() == 15);
  CHECK(normalize.agents[0].pdf(0.1) == doctest::Approx(1.0));
  for (int i = 1; i < 15; ++i)
    CHECK(normalize.agents[i].pdf(0.5) == doctest::Approx(3.0));

  const auto gap = fairdiv::builtin_profile("gap-counterexample");
  REQUIRE(gap.size() == 2);
  CHECK(gap.agents[0].support().lo == doctest::Approx(0.25));
  CHECK_FALSE(gap.agents[1].interval_support());

  const auto pct = fairdiv::builtin_profile("percentile-counterexample");
  REQUIRE(pct.size() == 2);
  CHECK(pct.agents[0].cdf(0.25) == doctest::Approx(0.5));
  CHECK(pct.agents[1].cdf(0.75) == doctest::Approx(0.5));

  CHECK_THROWS_AS(fairdiv::builtin_profile("no-such-profile"),
                  std::invalid_argument);
}

TEST_CASE("profile json and file loading") {
  const auto prof = fairdiv::builtin_profile("gap-counterexample");
  const auto back = AgentProfile::from_json(prof.to_json(), prof.name);
  REQUIRE(back.size() == prof.size());
  for (int i = 0; i < prof.size(); ++i)
    CHECK(back.agents[i].cdf(0.4) ==
          doctest::Approx(prof.agents[i].cdf(0.4)));

  CHECK(fairdiv::load_profile("peak10").size() == 10);
  CHECK_THROWS_AS(fairdiv::load_profile("missing-file.json"),
                  std::invalid_argument);
}

TEST_CASE("profile-wide bounds") {
  const auto peak10 = fairdiv::builtin_profile("peak10");
  REQUIRE(peak10.density_bounds().has_value());
  CHECK(peak10.density_bounds()->lower == doctest::Approx(0.1));
  CHECK(peak10.density_bounds()->upper == doctest::Approx(1.9));
  CHECK(peak10.interval_support());

  CHECK_FALSE(fairdiv::builtin_profile("beta5").density_bounds().has_value());
  CHECK_FALSE(
      fairdiv::builtin_profile("gap-counterexample").interval_support());
}
