#include "acimlab/measure.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "acimlab/error.hpp"
#include "acimlab/gora_density.hpp"
#include "acimlab/map_core.hpp"

namespace acimlab {

namespace {

// Distribution function as breakpoints with (value just after, slope) on each
// segment; jumps from atoms sit at breakpoints.
struct CdfPiece {
  double left;
  double value;  // F(left), right-continuous
  double slope;
};

std::vector<double> cdf_grid(const MeasureRepr& mu) {
  std::vector<double> g{0.0, 1.0};
  if (mu.density) g.insert(g.end(), mu.density->breakpoints().begin(), mu.density->breakpoints().end());
  for (const auto& a : mu.atoms) g.push_back(a.location);
  return g;
}

// Value of F at x (right-continuous) and its slope on the segment starting at x.
std::pair<double, double> cdf_and_slope(const MeasureRepr& mu, double x) {
  double slope = 0.0;
  if (mu.density && x < 1.0) slope = mu.density->value_at(x);
  return {mu.cdf(x), slope};
}

// Integral over [0, len] of |d0 + s t|.
double abs_linear_integral(double d0, double s, double len) {
  const double d1 = d0 + s * len;
  if ((d0 >= 0.0 && d1 >= 0.0) || (d0 <= 0.0 && d1 <= 0.0)) return 0.5 * std::abs(d0 + d1) * len;
  const double root = -d0 / s;
  return 0.5 * std::abs(d0) * root + 0.5 * std::abs(d1) * (len - root);
}

}  // namespace

double MeasureRepr::total_mass() const {
  double m = density ? density->integral() : 0.0;
  for (const auto& a : atoms) m += a.weight;
  return m;
}

double MeasureRepr::cdf(double x) const {
  double f = density ? density->integral_over(0.0, x) : 0.0;
  for (const auto& a : atoms) {
    if (a.location <= x) f += a.weight;
  }
  return f;
}

double wasserstein1(const MeasureRepr& mu, const MeasureRepr& nu) {
  for (const auto* m : {&mu, &nu}) {
    const double mass = m->total_mass();
    if (std::abs(mass - 1.0) > 1e-12) {
      throw ParameterError("wasserstein1: measure has total mass " + std::to_string(mass) + ", expected 1");
    }
    for (const auto& a : m->atoms) {
      if (!(a.location >= 0.0 && a.location <= 1.0) || !(a.weight > 0.0)) {
        throw ParameterError("wasserstein1: atoms need a location in [0,1] and positive weight");
      }
    }
  }
  auto grid = cdf_grid(mu);
  const auto g2 = cdf_grid(nu);
  grid.insert(grid.end(), g2.begin(), g2.end());
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  double total = 0.0;
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    const double x = grid[i];
    const double len = grid[i + 1] - x;
    const auto [fm, sm] = cdf_and_slope(mu, x);
    const auto [fn, sn] = cdf_and_slope(nu, x);
    total += abs_linear_integral(fm - fn, sm - sn, len);
  }
  return total;
}

double limit_density_weight(double s1, double s2, double p, double q, double r) {
  const double ac = (q * s1 + p * s2 - p - q) * (s2 + 2.0);
  const double singular = 2.0 * r * s1 * s2 * s2;
  return ac / (ac + singular);
}

MeasureRepr limit_measure(double s1, double s2, double p, double q, double r) {
  switch (classify_case(s1, s2)) {
    case Case::I:
      return MeasureRepr::dirac(0.5);
    case Case::II: {
      const double w = limit_density_weight(s1, s2, p, q, r);
      return {h0(s1, s2).scaled(w), {{0.5, 1.0 - w}}};
    }
    case Case::III:
      break;
  }
  return MeasureRepr::absolutely_continuous(h0(s1, s2));
}

}  // namespace acimlab
