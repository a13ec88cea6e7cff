#pragma once

// Reference computations written independently of the library kernels: the
// W map as chords through its corner points, brute-force Ulam entries by
// sampling, and Wasserstein-1 by midpoint quadrature of the CDF gap.

#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "acimlab/map_core.hpp"

namespace oracle {

// W_a as four chords: (0,1)-(b1,0), (b1,0)-(1/2,top), (1/2,top)-(b3,0), (b3,0)-(1,1).
inline double w_eval(const acimlab::WParams& w, double x) {
  const double top = 0.5 + w.r * w.a;
  const double b1 = 0.5 - top / (w.s1 + w.p * w.a);
  const double b3 = 0.5 + top / (w.s2 + w.q * w.a);
  auto chord = [x](double x0, double y0, double x1, double y1) { return y0 + (y1 - y0) * (x - x0) / (x1 - x0); };
  if (x < b1) return chord(0.0, 1.0, b1, 0.0);
  if (x < 0.5) return chord(b1, 0.0, 0.5, top);
  if (x < b3) return chord(0.5, top, b3, 0.0);
  return chord(b3, 0.0, 1.0, 1.0);
}

// Stopping index by plain iteration of the chord map.
inline int stopping_index(const acimlab::WParams& w) {
  const double top = 0.5 + w.r * w.a;
  const double threshold = 0.5 - top / (w.s1 + w.p * w.a);
  double x = top;
  for (int n = 1; n < 1000000; ++n) {
    if (x <= threshold) return n;
    x = w_eval(w, x);
  }
  return -1;
}

// Fraction of bin i sent into bin j, by sampling `samples` midpoints.
inline double ulam_entry(const std::function<double(double)>& f, const std::vector<double>& edges, std::size_t i,
                         std::size_t j, int samples) {
  int hits = 0;
  const double lo = edges[i], hi = edges[i + 1];
  for (int s = 0; s < samples; ++s) {
    const double y = f(lo + (hi - lo) * (s + 0.5) / samples);
    if (y >= edges[j] && y < edges[j + 1]) ++hits;
  }
  return static_cast<double>(hits) / samples;
}

// Integral over [0,1] of |F - G| by the midpoint rule.
inline double w1_quadrature(const std::function<double(double)>& F, const std::function<double(double)>& G, int n) {
  double s = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = (i + 0.5) / n;
    s += std::abs(F(x) - G(x));
  }
  return s / n;
}

inline double log_uniform(std::mt19937_64& rng, double lo, double hi) {
  std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
  return std::exp(u(rng));
}

// Valid parameters with 1/s1 + 1/s2 = 1 (want_equal) or < 1, a > 0 small
// enough that the turning orbit lingers near 1/2 for a few steps.
inline acimlab::WParams draw_formula_regime(std::mt19937_64& rng, bool want_equal) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (;;) {
    acimlab::WParams w;
    w.s1 = 1.2 + 2.3 * u(rng);
    const double s2_eq = w.s1 / (w.s1 - 1.0);
    w.s2 = want_equal ? s2_eq : s2_eq * (1.05 + 1.5 * u(rng));
    w.p = 0.2 + 3.0 * u(rng);
    w.q = 0.2 + 3.0 * u(rng);
    w.r = 0.2 + 3.0 * u(rng);
    const double cap = std::min(0.02, 0.25 * acimlab::max_valid_a(w.s1, w.s2, w.p, w.q, w.r));
    w.a = log_uniform(rng, 1e-5, cap);
    if (want_equal && acimlab::classify_case(w.s1, w.s2) != acimlab::Case::II) continue;
    return w;
  }
}

}  // namespace oracle
