#include "acimlab/density.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>

#include "acimlab/error.hpp"

namespace acimlab {

PiecewiseConstantDensity::PiecewiseConstantDensity(std::vector<double> breakpoints, std::vector<double> values)
    : breakpoints_(std::move(breakpoints)), values_(std::move(values)) {
  if (values_.empty() || breakpoints_.size() != values_.size() + 1) {
    throw ParameterError("density: need one value per cell");
  }
  if (breakpoints_.front() != 0.0 || breakpoints_.back() != 1.0) {
    throw ParameterError("density: breakpoints must start at 0 and end at 1");
  }
  for (std::size_t i = 0; i + 1 < breakpoints_.size(); ++i) {
    if (!(breakpoints_[i] < breakpoints_[i + 1])) {
      throw ParameterError("density: breakpoints must be strictly increasing");
    }
  }
  for (double v : values_) {
    if (!std::isfinite(v)) throw ParameterError("density: non-finite value");
  }
}

std::size_t PiecewiseConstantDensity::cell_of(double x) const {
  const auto first = breakpoints_.begin() + 1;
  const auto last = breakpoints_.end() - 1;
  return static_cast<std::size_t>(std::upper_bound(first, last, x) - first);
}

double PiecewiseConstantDensity::integral() const {
  double s = 0.0;
  for (std::size_t i = 0; i < values_.size(); ++i) s += values_[i] * (breakpoints_[i + 1] - breakpoints_[i]);
  return s;
}

double PiecewiseConstantDensity::integral_over(double lo, double hi) const {
  lo = std::max(lo, 0.0);
  hi = std::min(hi, 1.0);
  if (!(hi > lo)) return 0.0;
  double s = 0.0;
  for (std::size_t i = cell_of(lo); i < values_.size() && breakpoints_[i] < hi; ++i) {
    const double l = std::max(lo, breakpoints_[i]);
    const double h = std::min(hi, breakpoints_[i + 1]);
    if (h > l) s += values_[i] * (h - l);
  }
  return s;
}

double PiecewiseConstantDensity::abs_integral() const {
  double s = 0.0;
  for (std::size_t i = 0; i < values_.size(); ++i) {
    s += std::abs(values_[i]) * (breakpoints_[i + 1] - breakpoints_[i]);
  }
  return s;
}

double PiecewiseConstantDensity::sup() const { return *std::max_element(values_.begin(), values_.end()); }

double PiecewiseConstantDensity::inf() const { return *std::min_element(values_.begin(), values_.end()); }

double PiecewiseConstantDensity::essinf(double lo, double hi) const {
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (breakpoints_[i + 1] > lo && breakpoints_[i] < hi) m = std::min(m, values_[i]);
  }
  return m;
}

bool PiecewiseConstantDensity::is_normalized(double tol) const { return std::abs(integral() - 1.0) <= tol; }

PiecewiseConstantDensity PiecewiseConstantDensity::scaled(double factor) const {
  auto v = values_;
  for (double& x : v) x *= factor;
  return {breakpoints_, std::move(v)};
}

std::vector<double> dedup_breakpoints(std::vector<double> points, double tol) {
  points.push_back(0.0);
  points.push_back(1.0);
  std::vector<double> inside;
  inside.reserve(points.size());
  for (double x : points) {
    if (x > 0.0 && x < 1.0) inside.push_back(x);
  }
  std::sort(inside.begin(), inside.end());
  std::vector<double> out{0.0};
  for (double x : inside) {
    if (x - out.back() > tol) out.push_back(x);
  }
  if (1.0 - out.back() <= tol && out.size() > 1) out.back() = 1.0;
  else out.push_back(1.0);
  return out;
}

std::vector<double> common_refinement(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> out;
  out.reserve(a.size() + b.size());
  std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

PiecewiseConstantDensity difference(const PiecewiseConstantDensity& f, const PiecewiseConstantDensity& g) {
  auto grid = common_refinement(f.breakpoints(), g.breakpoints());
  std::vector<double> vals(grid.size() - 1);
  std::size_t i = 0, j = 0;
  for (std::size_t c = 0; c + 1 < grid.size(); ++c) {
    while (f.cell_right(i) <= grid[c]) ++i;
    while (g.cell_right(j) <= grid[c]) ++j;
    vals[c] = f.values()[i] - g.values()[j];
  }
  return {std::move(grid), std::move(vals)};
}

double l1_distance(const PiecewiseConstantDensity& f, const PiecewiseConstantDensity& g) {
  return difference(f, g).abs_integral();
}

PiecewiseConstantDensity normalize(const PiecewiseConstantDensity& f) {
  const double mass = f.integral();
  if (!(std::abs(mass) >= 1e-300)) {
    throw DegenerateNormalizationError(
        "normalize: integral is numerically zero; use the renormalized (1/Lambda) density");
  }
  auto vals = f.values();
  bool clamped = false;
  double worst = 0.0;
  for (double& v : vals) {
    v /= mass;
    if (v < 0.0) {
      worst = std::min(worst, v);
      v = 0.0;
      clamped = true;
    }
  }
  PiecewiseConstantDensity out(f.breakpoints(), std::move(vals));
  if (clamped) {
    if (worst < -1e-9) {
      std::cerr << "warning: normalize clamped negative cells to zero (min " << worst << ")\n";
    }
    out = out.scaled(1.0 / out.integral());
  }
  return out;
}

}  // namespace acimlab
