#include "fairdiv/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <boost/math/distributions/beta.hpp>
#include <boost/math/special_functions/beta.hpp>

namespace fairdiv {

namespace {

constexpr double kPeakLow = 0.1;   // density at the support endpoints
constexpr double kPeakHigh = 1.9;  // density at the peak location
constexpr double kPeakRise = kPeakHigh - kPeakLow;

void validate_unit(double x, const char* what) {
  if (!(x >= 0.0) || !(x <= 1.0))
    throw std::domain_error(std::string(what) + " outside [0, 1]");
}

boost::math::beta_distribution<double> boost_beta(double a, double b) {
  return boost::math::beta_distribution<double>(a, b);
}

// Keep beta evaluations strictly inside (0, 1): densities with shape < 1
// diverge at the endpoints and we want finite values at quadrature nodes
// that round onto them.
double clamp_interior(double x) {
  constexpr double lo = 1e-300;
  const double hi = 1.0 - std::numeric_limits<double>::epsilon() / 2;
  return std::min(std::max(x, lo), hi);
}

}  // namespace

UtilityDistribution UtilityDistribution::uniform(double lo, double hi) {
  validate_unit(lo, "uniform lo");
  validate_unit(hi, "uniform hi");
  if (!(lo < hi)) throw std::invalid_argument("uniform: requires lo < hi");
  UtilityDistribution d;
  d.kind_ = DistKind::Uniform;
  d.support_ = {lo, hi};
  d.segments_ = {{lo, hi, 1.0}};
  const double dens = 1.0 / (hi - lo);
  d.bounds_ = DensityBounds{dens, dens};
  d.breakpoints_ = {lo, hi};
  return d;
}

UtilityDistribution UtilityDistribution::peak(double a) {
  if (!(a > 0.0) || !(a < 1.0))
    throw std::invalid_argument("peak: location must lie in (0, 1)");
  UtilityDistribution d;
  d.kind_ = DistKind::Peak;
  d.support_ = {0.0, 1.0};
  d.a_ = a;
  d.bounds_ = DensityBounds{kPeakLow, kPeakHigh};
  d.breakpoints_ = {0.0, a, 1.0};
  return d;
}

UtilityDistribution UtilityDistribution::piecewise_uniform(
    std::vector<PiecewiseSegment> segments) {
  if (segments.empty())
    throw std::invalid_argument("piecewise_uniform: no segments");
  std::sort(segments.begin(), segments.end(),
            [](const PiecewiseSegment& x, const PiecewiseSegment& y) {
              return x.lo < y.lo;
            });
  double total = 0.0;
  for (std::size_t k = 0; k < segments.size(); ++k) {
    const auto& s = segments[k];
    validate_unit(s.lo, "segment lo");
    validate_unit(s.hi, "segment hi");
    if (!(s.lo < s.hi))
      throw std::invalid_argument("piecewise_uniform: empty segment");
    if (!(s.weight > 0.0))
      throw std::invalid_argument("piecewise_uniform: weight must be > 0");
    if (k > 0 && s.lo < segments[k - 1].hi - 1e-12)
      throw std::invalid_argument("piecewise_uniform: overlapping segments");
    total += s.weight;
  }
  if (std::abs(total - 1.0) > 1e-9)
    throw std::invalid_argument("piecewise_uniform: weights must sum to 1");
  for (auto& s : segments) s.weight /= total;

  UtilityDistribution d;
  d.kind_ = DistKind::PiecewiseUniform;
  d.segments_ = std::move(segments);
  d.support_ = {d.segments_.front().lo, d.segments_.back().hi};
  d.interval_support_ = true;
  for (std::size_t k = 0; k + 1 < d.segments_.size(); ++k)
    if (d.segments_[k + 1].lo - d.segments_[k].hi > 1e-12)
      d.interval_support_ = false;
  if (d.interval_support_) {
    double pmin = std::numeric_limits<double>::infinity(), pmax = 0.0;
    for (const auto& s : d.segments_) {
      const double dens = s.weight / (s.hi - s.lo);
      pmin = std::min(pmin, dens);
      pmax = std::max(pmax, dens);
    }
    d.bounds_ = DensityBounds{pmin, pmax};
  }
  for (const auto& s : d.segments_) {
    d.breakpoints_.push_back(s.lo);
    d.breakpoints_.push_back(s.hi);
  }
  std::sort(d.breakpoints_.begin(), d.breakpoints_.end());
  d.breakpoints_.erase(
      std::unique(d.breakpoints_.begin(), d.breakpoints_.end()),
      d.breakpoints_.end());
  return d;
}

UtilityDistribution UtilityDistribution::beta(double alpha, double beta) {
  if (!(alpha > 0.0) || !(beta > 0.0))
    throw std::invalid_argument("beta: shapes must be > 0");
  UtilityDistribution d;
  d.kind_ = DistKind::Beta;
  d.support_ = {0.0, 1.0};
  d.alpha_ = alpha;
  d.beta_ = beta;
  d.breakpoints_ = {0.0, 1.0};
  return d;
}

double UtilityDistribution::pdf(double x) const {
  validate_unit(x, "pdf argument");
  switch (kind_) {
    case DistKind::Uniform:
    case DistKind::PiecewiseUniform: {
      for (const auto& s : segments_)
        if (x >= s.lo && x <= s.hi) return s.weight / (s.hi - s.lo);
      return 0.0;
    }
    case DistKind::Peak:
      if (x <= a_) return kPeakLow + kPeakRise * x / a_;
      return kPeakLow + kPeakRise * (1.0 - x) / (1.0 - a_);
    case DistKind::Beta:
      return boost::math::pdf(boost_beta(alpha_, beta_), clamp_interior(x));
  }
  return 0.0;
}

double UtilityDistribution::cdf(double x) const {
  if (x <= support_.lo) return 0.0;
  if (x >= support_.hi) return 1.0;
  switch (kind_) {
    case DistKind::Uniform:
    case DistKind::PiecewiseUniform: {
      double acc = 0.0;
      for (const auto& s : segments_) {
        if (x >= s.hi) {
          acc += s.weight;
        } else {
          if (x > s.lo) acc += s.weight * (x - s.lo) / (s.hi - s.lo);
          break;
        }
      }
      return acc;
    }
    case DistKind::Peak:
      if (x <= a_)
        return kPeakLow * x + (kPeakRise / 2.0) * x * x / a_;
      else {
        const double y = 1.0 - x;
        return 1.0 - (kPeakLow * y + (kPeakRise / 2.0) * y * y / (1.0 - a_));
      }
    case DistKind::Beta:
      return boost::math::cdf(boost_beta(alpha_, beta_), x);
  }
  return 0.0;
}

double UtilityDistribution::quantile(double u) const {
  if (!(u >= 0.0) || !(u <= 1.0))
    throw std::domain_error("quantile argument outside [0, 1]");
  switch (kind_) {
    case DistKind::Uniform:
    case DistKind::PiecewiseUniform: {
      double acc = 0.0;
      for (const auto& s : segments_) {
        if (u <= acc + s.weight || &s == &segments_.back())
          return std::min(s.hi, s.lo + (u - acc) / s.weight * (s.hi - s.lo));
        acc += s.weight;
      }
      return support_.hi;
    }
    case DistKind::Peak: {
      // Invert the quadratic cdf on whichever side of the peak u falls;
      // F(a) = a, so the left branch applies exactly when u <= a.
      if (u <= a_) {
        const double s =
            std::sqrt(kPeakLow * kPeakLow + 2.0 * kPeakRise * u / a_);
        return a_ * (s - kPeakLow) / kPeakRise;
      }
      const double s = std::sqrt(kPeakLow * kPeakLow +
                                 2.0 * kPeakRise * (1.0 - u) / (1.0 - a_));
      return 1.0 - (1.0 - a_) * (s - kPeakLow) / kPeakRise;
    }
    case DistKind::Beta:
      if (u == 0.0) return 0.0;
      if (u == 1.0) return 1.0;
      return boost::math::quantile(boost_beta(alpha_, beta_), u);
  }
  return 0.0;
}

double UtilityDistribution::mean() const {
  switch (kind_) {
    case DistKind::Uniform:
    case DistKind::PiecewiseUniform: {
      double m = 0.0;
      for (const auto& s : segments_) m += s.weight * 0.5 * (s.lo + s.hi);
      return m;
    }
    case DistKind::Peak:
      // 1/20 + 9/10 (1 + a) / 3, collected.
      return 0.35 + 0.3 * a_;
    case DistKind::Beta:
      return alpha_ / (alpha_ + beta_);
  }
  return 0.0;
}

double UtilityDistribution::partial_expectation(double t) const {
  if (t <= support_.lo) return 0.0;
  if (t >= support_.hi) return mean();
  switch (kind_) {
    case DistKind::Uniform:
    case DistKind::PiecewiseUniform: {
      double acc = 0.0;
      for (const auto& s : segments_) {
        if (t <= s.lo) break;
        const double dens = s.weight / (s.hi - s.lo);
        const double top = std::min(t, s.hi);
        acc += dens * 0.5 * (top * top - s.lo * s.lo);
      }
      return acc;
    }
    case DistKind::Peak: {
      const double tl = std::min(t, a_);
      // integral of u (0.1 + 1.8 u / a) over [0, tl]
      double acc = 0.05 * tl * tl + (kPeakRise / 3.0) * tl * tl * tl / a_;
      if (t > a_) {
        const double c1 = kPeakLow + kPeakRise / (1.0 - a_);
        const double c2 = kPeakRise / (1.0 - a_);
        acc += c1 / 2.0 * (t * t - a_ * a_) - c2 / 3.0 * (t * t * t - a_ * a_ * a_);
      }
      return acc;
    }
    case DistKind::Beta:
      // integral of u f(u) = mean * I_t(alpha + 1, beta)
      return mean() * boost::math::ibeta(alpha_ + 1.0, beta_, t);
  }
  return 0.0;
}

double UtilityDistribution::sample(RandomSource& rng) const {
  if (kind_ == DistKind::Beta) return rng.beta(alpha_, beta_);
  return quantile(rng.u01());
}

nlohmann::json UtilityDistribution::to_json() const {
  nlohmann::json j;
  switch (kind_) {
    case DistKind::Uniform:
      j["kind"] = "uniform";
      j["params"] = {{"lo", support_.lo}, {"hi", support_.hi}};
      break;
    case DistKind::Peak:
      j["kind"] = "peak";
      j["params"] = {{"a", a_}};
      break;
    case DistKind::PiecewiseUniform: {
      j["kind"] = "piecewise_uniform";
      nlohmann::json segs = nlohmann::json::array();
      for (const auto& s : segments_)
        segs.push_back({{"lo", s.lo}, {"hi", s.hi}, {"weight", s.weight}});
      j["params"] = {{"segments", segs}};
      break;
    }
    case DistKind::Beta:
      j["kind"] = "beta";
      j["params"] = {{"alpha", alpha_}, {"beta", beta_}};
      break;
  }
  return j;
}

UtilityDistribution UtilityDistribution::from_json(const nlohmann::json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  const nlohmann::json& p = j.at("params");
  if (kind == "uniform")
    return uniform(p.at("lo").get<double>(), p.at("hi").get<double>());
  if (kind == "peak") return peak(p.at("a").get<double>());
  if (kind == "piecewise_uniform") {
    std::vector<PiecewiseSegment> segs;
    for (const auto& s : p.at("segments"))
      segs.push_back({s.at("lo").get<double>(), s.at("hi").get<double>(),
                      s.at("weight").get<double>()});
    return piecewise_uniform(std::move(segs));
  }
  if (kind == "beta")
    return beta(p.at("alpha").get<double>(), p.at("beta").get<double>());
  throw std::invalid_argument("unknown distribution kind: " + kind);
}

}  // namespace fairdiv
