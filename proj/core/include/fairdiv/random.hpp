#pragma once

#include <cstdint>
#include <random>

namespace fairdiv {

// Deterministic random source. Wraps std::mt19937_64 (whose output sequence
// is pinned by the standard) and derives floating point variates with fixed
// arithmetic rather than the implementation-defined standard distributions,
// so that results are bit-for-bit reproducible across platforms.
class RandomSource {
 public:
  explicit RandomSource(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t bits() { return engine_(); }

  // Uniform on [0, 1), 53 bit resolution.
  double u01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * u01(); }

  // Integer uniform on [lo, hi] inclusive (rejection-free modulo bias is
  // negligible for the small ranges used here, but we reject anyway).
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);

  // Standard normal via Box-Muller (cached second variate).
  double normal();

  // Gamma(shape, 1) via Marsaglia-Tsang squeeze; shape < 1 handled by
  // boosting to shape + 1 and scaling by u^(1/shape).
  double gamma(double shape);

  // Beta(a, b) as a gamma ratio.
  double beta(double a, double b);

 private:
  std::mt19937_64 engine_;
  bool has_cached_normal_ = false;
  double cached_normal_ = 0.0;
};

// Stable seed derivation for (base, stream, index) triples, used to give
// every experiment trial its own independent generator regardless of how
// trials are scheduled across workers. splitmix64-style finalizers.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream,
                          std::uint64_t index);

}  // namespace fairdiv
