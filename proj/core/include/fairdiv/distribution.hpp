#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "fairdiv/random.hpp"

namespace fairdiv {

struct SupportInterval {
  double lo = 0.0;
  double hi = 1.0;
  double length() const { return hi - lo; }
};

// Density bounds p <= f(x) <= q on the support. Only meaningful for
// distributions whose support is a single interval.
struct DensityBounds {
  double lower = 0.0;  // p
  double upper = 0.0;  // q
};

enum class DistKind { Uniform, Peak, PiecewiseUniform, Beta };

struct PiecewiseSegment {
  double lo = 0.0;
  double hi = 0.0;
  double weight = 0.0;  // probability mass of the segment
};

// A utility distribution on [0, 1]. Immutable after construction, so
// instances can be shared freely across threads.
//
// Supported families:
//   uniform(lo, hi)        flat on [lo, hi] within [0, 1]
//   peak(a)                piecewise linear on [0, 1], rising from 1/10 at 0
//                          to 19/10 at the peak location a, then falling
//                          back to 1/10 at 1
//   piecewise_uniform(..)  flat segments with given masses; segments may
//                          leave gaps, in which case the support is not an
//                          interval
//   beta(alpha, beta)      standard beta on [0, 1]
class UtilityDistribution {
 public:
  static UtilityDistribution uniform(double lo, double hi);
  static UtilityDistribution peak(double a);
  static UtilityDistribution piecewise_uniform(
      std::vector<PiecewiseSegment> segments);
  static UtilityDistribution beta(double alpha, double beta);

  DistKind kind() const { return kind_; }
  SupportInterval support() const { return support_; }
  // True if the support is a single interval (no interior gaps).
  bool interval_support() const { return interval_support_; }
  // Density bounds on the support, when the family admits finite positive
  // ones (uniform, peak, gap-free piecewise). Empty for beta and for
  // piecewise families with gaps.
  std::optional<DensityBounds> density_bounds() const { return bounds_; }

  // Density. x must lie in [0, 1]; throws std::domain_error otherwise.
  // At an endpoint where the density diverges (beta with shape < 1) the
  // value at the nearest representable interior point is returned so that
  // quadrature stays finite.
  double pdf(double x) const;

  // Cumulative distribution, extended to all of R by clamping: 0 below the
  // support, 1 above it.
  double cdf(double x) const;

  // Inverse cdf for u in [0, 1].
  double quantile(double u) const;

  double mean() const;

  // Partial expectation: integral of u f(u) du over [0, min(t, 1)].
  // t above the support returns the full mean, t below it returns 0.
  double partial_expectation(double t) const;

  double sample(RandomSource& rng) const;

  // Sorted points where the density or its derivative jumps (support
  // endpoints, segment boundaries, the peak location). Integration against
  // this distribution should force panel cuts here.
  std::span<const double> breakpoints() const { return breakpoints_; }

  const std::vector<PiecewiseSegment>& segments() const { return segments_; }
  double peak_location() const { return a_; }
  double beta_alpha() const { return alpha_; }
  double beta_beta() const { return beta_; }

  nlohmann::json to_json() const;
  static UtilityDistribution from_json(const nlohmann::json& j);

 private:
  UtilityDistribution() = default;

  DistKind kind_ = DistKind::Uniform;
  SupportInterval support_;
  bool interval_support_ = true;
  std::optional<DensityBounds> bounds_;
  std::vector<double> breakpoints_;

  // family parameters (only the relevant ones are set)
  std::vector<PiecewiseSegment> segments_;  // uniform and piecewise
  double a_ = 0.0;                          // peak location
  double alpha_ = 0.0, beta_ = 0.0;         // beta shapes
};

}  // namespace fairdiv
