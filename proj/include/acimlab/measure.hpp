#pragma once

#include <optional>
#include <vector>

#include "acimlab/density.hpp"

namespace acimlab {

struct Atom {
  double location;
  double weight;
};

/// Probability measure on [0,1]: absolutely continuous part plus point masses.
struct MeasureRepr {
  std::optional<PiecewiseConstantDensity> density;
  std::vector<Atom> atoms;

  static MeasureRepr dirac(double x) { return {std::nullopt, {{x, 1.0}}}; }
  static MeasureRepr absolutely_continuous(PiecewiseConstantDensity f) { return {std::move(f), {}}; }

  double total_mass() const;
  /// Right-continuous distribution function.
  double cdf(double x) const;
};

/// Integral of |F_mu - F_nu| over [0,1], exact for step densities and atoms.
/// Throws ParameterError unless both masses equal 1 within 1e-12.
double wasserstein1(const MeasureRepr& mu, const MeasureRepr& nu);

/// Weak-* limit of the invariant measures of W_a as a -> 0.
MeasureRepr limit_measure(double s1, double s2, double p, double q, double r);

/// Weight of the absolutely continuous part in the 1/s1 + 1/s2 = 1 limit.
double limit_density_weight(double s1, double s2, double p, double q, double r);

}  // namespace acimlab
