#pragma once

#include <cstddef>
#include <vector>

namespace acimlab {

/// Step function on [0,1]: value[i] on [breakpoints[i], breakpoints[i+1]).
///
/// Values are allowed to be negative: the unnormalized invariant densities of
/// the W family are naturally written with a signed overall factor and only
/// become nonnegative after division by their integral.
class PiecewiseConstantDensity {
 public:
  PiecewiseConstantDensity() : breakpoints_{0.0, 1.0}, values_{1.0} {}
  PiecewiseConstantDensity(std::vector<double> breakpoints, std::vector<double> values);

  static PiecewiseConstantDensity constant(double value) { return {{0.0, 1.0}, {value}}; }

  const std::vector<double>& breakpoints() const { return breakpoints_; }
  const std::vector<double>& values() const { return values_; }
  std::size_t cell_count() const { return values_.size(); }
  double cell_left(std::size_t i) const { return breakpoints_[i]; }
  double cell_right(std::size_t i) const { return breakpoints_[i + 1]; }

  std::size_t cell_of(double x) const;
  double value_at(double x) const { return values_[cell_of(x)]; }

  double integral() const;
  double integral_over(double lo, double hi) const;
  double abs_integral() const;
  double sup() const;
  double inf() const;
  /// Minimum value over the cells of positive width meeting (lo, hi).
  double essinf(double lo = 0.0, double hi = 1.0) const;
  bool is_normalized(double tol = 1e-12) const;

  PiecewiseConstantDensity scaled(double factor) const;

 private:
  std::vector<double> breakpoints_;
  std::vector<double> values_;
};

/// Merge breakpoints closer than tol (keeps the first of each cluster, and
/// always keeps 0 and 1).
std::vector<double> dedup_breakpoints(std::vector<double> points, double tol);

/// Union of two breakpoint grids.
std::vector<double> common_refinement(const std::vector<double>& a, const std::vector<double>& b);

double l1_distance(const PiecewiseConstantDensity& f, const PiecewiseConstantDensity& g);

/// Pointwise f - g on the common refinement.
PiecewiseConstantDensity difference(const PiecewiseConstantDensity& f, const PiecewiseConstantDensity& g);

/// f / integral(f). Throws DegenerateNormalizationError when |integral| < 1e-300.
/// Negative cells left over from cancellation are clamped to zero (and the
/// result rescaled); a warning goes to stderr when one was below -1e-9.
PiecewiseConstantDensity normalize(const PiecewiseConstantDensity& f);

}  // namespace acimlab
