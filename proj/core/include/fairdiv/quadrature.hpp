#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <queue>
#include <span>
#include <vector>

#include "fairdiv/errors.hpp"

namespace fairdiv {

struct QuadratureOptions {
  double abs_tol = 1e-8;  // absolute tolerance for the whole integral
  int max_panels = 4000;  // refinement budget before giving up
};

struct IntegralResult {
  double value = 0.0;
  double error = 0.0;  // accumulated panel error estimates
  int panels = 0;
};

namespace detail {

// 15 point Kronrod rule with embedded 7 point Gauss rule on [-1, 1].
// Nodes are symmetric; only the nonnegative half is tabulated.
inline constexpr double kGK15Nodes[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};

inline constexpr double kK15Weights[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};

// Weights of the embedded Gauss rule, matching nodes 1, 3, 5, 7 above.
inline constexpr double kG7Weights[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct Panel {
  double lo, hi, value, error;
  bool operator<(const Panel& o) const { return error < o.error; }
};

// One Kronrod panel with the QUADPACK error estimate: the raw Gauss/Kronrod
// difference is rescaled against the integrand's variation (resasc) so that
// panels hugging an integrable singularity report realistic errors instead
// of their full mass.
template <class F>
Panel gk15(const F& f, double lo, double hi) {
  const double c = 0.5 * (lo + hi);
  const double h = 0.5 * (hi - lo);
  double fv1[7], fv2[7];
  const double fc = f(c);
  double resk = kK15Weights[7] * fc;
  double resg = kG7Weights[3] * fc;
  double resabs = kK15Weights[7] * std::abs(fc);
  for (int i = 0; i < 7; ++i) {
    const double dx = h * kGK15Nodes[i];
    fv1[i] = f(c - dx);
    fv2[i] = f(c + dx);
    resk += kK15Weights[i] * (fv1[i] + fv2[i]);
    resabs += kK15Weights[i] * (std::abs(fv1[i]) + std::abs(fv2[i]));
    if (i % 2 == 1) resg += kG7Weights[i / 2] * (fv1[i] + fv2[i]);
  }
  const double reskh = resk * 0.5;
  double resasc = kK15Weights[7] * std::abs(fc - reskh);
  for (int i = 0; i < 7; ++i)
    resasc += kK15Weights[i] *
              (std::abs(fv1[i] - reskh) + std::abs(fv2[i] - reskh));
  resasc *= h;
  resabs *= h;
  double err = std::abs((resk - resg) * h);
  if (resasc != 0.0 && err != 0.0)
    err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  const double eps = std::numeric_limits<double>::epsilon();
  const double uflow = std::numeric_limits<double>::min();
  if (resabs > uflow / (50.0 * eps)) err = std::max(eps * 50.0 * resabs, err);
  return Panel{lo, hi, resk * h, err};
}

}  // namespace detail

// Adaptive integration of f over [lo, hi]. The integrand is assumed smooth
// between consecutive breakpoints (support endpoints, density kinks), so the
// initial subdivision is forced there; panels are then split greedily at the
// largest error estimate until the total estimate drops below abs_tol.
// Throws numerical_error if the panel budget is exhausted first.
template <class F>
IntegralResult integrate_adaptive(const F& f, double lo, double hi,
                                  std::span<const double> breakpoints,
                                  const QuadratureOptions& opts = {}) {
  IntegralResult out;
  if (!(lo < hi)) return out;

  std::vector<double> cuts;
  cuts.reserve(breakpoints.size() + 2);
  cuts.push_back(lo);
  for (double b : breakpoints)
    if (b > lo && b < hi) cuts.push_back(b);
  cuts.push_back(hi);
  std::sort(cuts.begin(), cuts.end());

  std::priority_queue<detail::Panel> heap;
  double heap_error = 0.0;
  double frozen_value = 0.0, frozen_error = 0.0;
  int panels = 0;

  auto push = [&](double a, double b) {
    detail::Panel p = detail::gk15(f, a, b);
    ++panels;
    heap_error += p.error;
    heap.push(p);
  };

  for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
    if (cuts[i + 1] > cuts[i]) push(cuts[i], cuts[i + 1]);

  while (!heap.empty() && heap_error + frozen_error > opts.abs_tol) {
    detail::Panel worst = heap.top();
    const double mid = 0.5 * (worst.lo + worst.hi);
    heap.pop();
    heap_error -= worst.error;
    if (!(mid > worst.lo) || !(mid < worst.hi)) {
      // Width is down to floating point resolution; accept as-is.
      frozen_value += worst.value;
      frozen_error += worst.error;
      continue;
    }
    if (panels + 2 > opts.max_panels)
      throw numerical_error("quadrature: panel budget exhausted");
    push(worst.lo, mid);
    push(mid, worst.hi);
  }

  out.value = frozen_value;
  out.error = frozen_error + heap_error;
  out.panels = panels;
  while (!heap.empty()) {
    out.value += heap.top().value;
    heap.pop();
  }
  if (out.error > opts.abs_tol)
    throw numerical_error("quadrature: failed to reach tolerance");
  return out;
}

}  // namespace fairdiv
