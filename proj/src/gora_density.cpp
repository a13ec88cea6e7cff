#include "acimlab/gora_density.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "acimlab/error.hpp"

namespace acimlab {

namespace {

constexpr double kMergeTol = 1e-14;
constexpr int kMaxSeriesTerms = 1000000;

void require_formula_regime(const WParams& w, const char* who) {
  validate(w);
  if (classify_case(w.s1, w.s2) == Case::I) {
    throw PreconditionError(std::string(who) + " requires 1/s1 + 1/s2 <= 1");
  }
  if (!(w.a > 0.0)) throw PreconditionError(std::string(who) + " requires a > 0");
}

// W_a in extended precision. Rounding errors along the turning orbit grow
// like the cumulative slope, which reaches 1/a^2 near the stopping index.
#if defined(__SIZEOF_FLOAT128__)
using orbit_real = __float128;
#else
using orbit_real = long double;
#endif

struct ExtendedMap {
  using real = orbit_real;
  real sl, sr, top, b1, b3, slope1, slope4;

  explicit ExtendedMap(const WParams& w) {
    const real s1 = w.s1, s2 = w.s2, p = w.p, q = w.q, r = w.r, a = w.a;
    sl = s1 + p * a;
    sr = s2 + q * a;
    top = real(0.5) + r * a;
    b1 = real(0.5) - top / sl;
    b3 = real(0.5) + top / sr;
    slope1 = -2 * sl / (s1 - 1 + p * a - 2 * r * a);
    slope4 = 2 * sr / (s2 - 1 + q * a - 2 * r * a);
  }
  real slope_at(real x) const { return x < b1 ? slope1 : x < real(0.5) ? sl : x < b3 ? -sr : slope4; }
  real operator()(real x) const {
    if (x < b1) return 1 + slope1 * x;
    if (x < real(0.5)) return top + sl * (x - real(0.5));
    if (x < b3) return top - sr * (x - real(0.5));
    return 1 + slope4 * (x - 1);
  }
};

// Terms of the turning-point series: W^n(1/2) and beta(1/2, n), n = 1..N,
// where N is the first index whose geometric tail bound is below cutoff.
struct SeriesTerms {
  std::vector<double> x;
  std::vector<double> beta;
};

SeriesTerms series_terms(const PiecewiseLinearMap& map, const WParams& w, double cutoff) {
  const double ratio = map.min_abs_slope();
  const ExtendedMap ext(w);
  SeriesTerms t;
  orbit_real x = ext.top;
  orbit_real beta = ext.sl;  // j(c1) = 2
  for (int n = 1; n <= kMaxSeriesTerms; ++n) {
    t.x.push_back(static_cast<double>(x));
    t.beta.push_back(static_cast<double>(beta));
    if (1.0 / (std::abs(t.beta.back()) * (ratio - 1.0)) < cutoff) return t;
    beta *= ext.slope_at(x);
    x = ext(x);
  }
  throw TruncationError("turning-point series did not reach the requested tail bound");
}

// offset + scale * sum_n chi^s(beta_n, x_n) / |beta_n| on the merged orbit grid.
// chi^s is the indicator of [0, x] for positive beta and of [x, 1] otherwise.
PiecewiseConstantDensity series_step_function(const SeriesTerms& t, double offset, double scale) {
  const auto grid = dedup_breakpoints(t.x, kMergeTol);
  const std::size_t cells = grid.size() - 1;
  std::vector<double> mids(cells);
  for (std::size_t i = 0; i < cells; ++i) mids[i] = 0.5 * (grid[i] + grid[i + 1]);

  // diff[i] is the jump entering cell i; cells with midpoint < x form [0, x].
  std::vector<double> diff(cells + 1, 0.0);
  for (std::size_t n = 0; n < t.x.size(); ++n) {
    const double w = 1.0 / std::abs(t.beta[n]);
    const auto split = static_cast<std::size_t>(std::lower_bound(mids.begin(), mids.end(), t.x[n]) - mids.begin());
    if (t.beta[n] > 0.0) {
      diff[0] += w;
      diff[split] -= w;
    } else {
      diff[split] += w;
    }
  }
  std::vector<double> vals(cells);
  double run = 0.0;
  for (std::size_t i = 0; i < cells; ++i) {
    run += diff[i];
    vals[i] = offset + scale * run;
  }
  return {grid, std::move(vals)};
}

struct SMatrix {
  double S11;
  double S22;
};

SMatrix s_matrix(const SeriesTerms& t, const WParams& w) {
  SMatrix s{0.0, 0.0};
  double beta2 = -w.right_slope();  // j(c2) = 3
  for (std::size_t n = 0; n < t.x.size(); ++n) {
    const double x = t.x[n];
    const double b1 = t.beta[n];
    if ((b1 > 0.0 && x > 0.5) || (b1 < 0.0 && x < 0.5)) s.S11 += 1.0 / std::abs(b1);
    if ((beta2 < 0.0 && x > 0.5) || (beta2 > 0.0 && x < 0.5)) s.S22 += 1.0 / std::abs(beta2);
    if (n + 1 < t.beta.size()) beta2 *= t.beta[n + 1] / t.beta[n];
  }
  return s;
}

double chi_weight(const WParams& w) { return 1.0 + w.left_slope() / w.right_slope(); }

}  // namespace

GoraSetup gora_setup(const WParams& w) {
  const auto map = build_w_map(w);
  GoraSetup g;
  g.alpha = {1.0, w.peak(), w.peak(), 1.0};
  const auto intercepts = map.intercepts();
  for (std::size_t i = 0; i < 4; ++i) {
    g.beta[i] = map.slopes()[i];
    g.gamma[i] = 0.0;
    g.digits[i] = -intercepts[i];
  }
  return g;
}

TurningOrbit turning_orbit(const WParams& w, int max_steps) {
  require_formula_regime(w, "turning_orbit");
  const ExtendedMap map(w);
  const orbit_real threshold = map.b1;
  TurningOrbit t;
  orbit_real x = map.top;
  orbit_real beta = map.sl;
  for (int n = 1;; ++n) {
    if (n > max_steps) {
      throw TruncationError("turning_orbit: stopping index exceeds max_steps = " + std::to_string(max_steps) +
                            "; raise max_steps");
    }
    t.orbit.push_back(static_cast<double>(x));
    t.cum_slopes.push_back(static_cast<double>(beta));
    if (x <= threshold) {
      t.k = n;
      break;
    }
    beta *= map.slope_at(x);
    x = map(x);
  }
  t.k1 = (2 * t.k) / 3;
  t.closed_form_k = closed_form_stopping_time(w);
  return t;
}

namespace {

// For 3 <= m <= k, W^m(1/2) = base - lift * (s1+pa)^(m-2), evaluated in the
// orbit precision so that the cancellation near the stopping index is exact
// to double accuracy.
struct OrbitClosedForm {
  orbit_real base;
  orbit_real lift;
  orbit_real sl;
};

OrbitClosedForm orbit_closed_form(const WParams& w) {
  const orbit_real s1 = w.s1, s2 = w.s2, p = w.p, q = w.q, r = w.r, a = w.a;
  OrbitClosedForm cf{};
  cf.sl = s1 + p * a;
  cf.base = (s1 - 1 + p * a - 2 * r * a) / (2 * (cf.sl - 1));
  // With s1 s2 = s1 + s2 the leading term vanishes and the lift is O(a^2).
  // Keeping it makes the closed form exact for the rounded slopes as well.
  cf.lift = a * r * (s1 * s2 - s1 - s2 + a * (q * s1 + p * s2 - p - q + p * q * a)) / (cf.sl - 1);
  return cf;
}

orbit_real integer_power(orbit_real x, int n) {
  orbit_real out = 1;
  for (; n > 0; n >>= 1, x *= x) {
    if (n & 1) out *= x;
  }
  return out;
}

orbit_real closed_form_point(const WParams& w, const OrbitClosedForm& cf, int m) {
  const orbit_real ra = orbit_real(w.r) * orbit_real(w.a);
  if (m == 1) return orbit_real(0.5) + ra;
  if (m == 2) return orbit_real(0.5) + ra - ra * (orbit_real(w.s2) + orbit_real(w.q) * orbit_real(w.a));
  return cf.base - cf.lift * integer_power(cf.sl, m - 2);
}

}  // namespace

double closed_form_orbit_point(const WParams& w, int m) {
  return static_cast<double>(closed_form_point(w, orbit_closed_form(w), m));
}

int closed_form_stopping_time(const WParams& w) {
  const auto cf = orbit_closed_form(w);
  const orbit_real threshold = ExtendedMap(w).b1;
  if (closed_form_point(w, cf, 1) <= threshold) return 1;
  if (closed_form_point(w, cf, 2) <= threshold) return 2;
  // Solve base - lift * sl^(m-2) <= threshold for m, then settle rounding at
  // the boundary against the closed form itself.
  const double need = static_cast<double>((cf.base - threshold) / cf.lift);
  int m = 2 + static_cast<int>(std::ceil(std::log(need) / std::log(w.left_slope())));
  m = std::max(m, 3);
  while (m > 3 && closed_form_point(w, cf, m - 1) <= threshold) --m;
  while (closed_form_point(w, cf, m) > threshold) ++m;
  return m;
}

double vartheta(double s1, double s2) {
  return 1.0 - ((s1 + s2) / (s1 * s2) + (s1 + s2) / (s2 * s2 * (s1 - 1.0)));
}

LambdaData lambda_solve(const WParams& w, double series_cutoff) {
  require_formula_regime(w, "lambda_solve");
  const auto map = build_w_map(w);
  const auto terms = series_terms(map, w, series_cutoff);
  const auto s = s_matrix(terms, w);
  const double sl = w.left_slope(), sr = w.right_slope();

  LambdaData d;
  d.S11 = s.S11;
  d.S22 = s.S22;
  // (I - S^T) D = (1, 1) with S = [[S11, S11], [S22, S22]]; det = 1 - S11 - S22
  // and D1 = D2 = 1/det.
  const double det = (1.0 - s.S11) * (1.0 - s.S22) - s.S11 * s.S22;
  if (std::abs(det) < 1e-14) {
    throw NearSingularError("lambda_solve: 1 - S11 - S22 = " + std::to_string(det) +
                            " is numerically zero (vartheta ~ 0); use renormalized_density_vartheta0");
  }
  const double d1 = ((1.0 - s.S22) + s.S22) / det;
  d.Lambda = d1;
  d.inverse_Lambda = det;
  d.Lambda_from_S11 = 1.0 / (1.0 - (sl + sr) / sr * s.S11);

  d.kappa = (sl + sr) / (sl * sr);
  d.eta = (sl + sr) / (sr * sr * (sl - 1.0));
  d.vartheta = vartheta(w.s1, w.s2);
  const auto orbit = turning_orbit(w);
  d.Lambda_l = 1.0 / (1.0 - (d.kappa + d.eta * (1.0 - std::pow(sl, -(orbit.k1 - 1)))));
  d.Lambda_h = 1.0 / (1.0 - (d.kappa + d.eta));
  return d;
}

PiecewiseConstantDensity density_series(const WParams& w, double tail_tol) {
  require_formula_regime(w, "density_series");
  const double cutoff = std::min(1e-12, tail_tol);
  const auto lambda = lambda_solve(w, cutoff);
  if (!std::isfinite(lambda.Lambda)) throw NearSingularError("density_series: Lambda is not finite");
  const auto map = build_w_map(w);
  // The omitted terms enter f_a multiplied by c * Lambda.
  const double scale = chi_weight(w) * lambda.Lambda;
  const auto terms = series_terms(map, w, tail_tol / std::max(1.0, std::abs(scale)));
  return series_step_function(terms, 1.0, scale);
}

TruncatedSeries truncated_series(const WParams& w) {
  const auto orbit = turning_orbit(w);
  const double sl = w.left_slope(), sr = w.right_slope();
  SeriesTerms t;
  // First term chi_[0, W(1/2)] / (s1+pa); then chi_[W^j(1/2), 1] / ((s2+qa)(s1+pa)^(j-1)).
  t.x.push_back(orbit.orbit[0]);
  t.beta.push_back(sl);
  for (int j = 2; j <= orbit.k1; ++j) {
    t.x.push_back(orbit.orbit[j - 1]);
    t.beta.push_back(-sr * std::pow(sl, j - 1));
  }
  TruncatedSeries out{series_step_function(t, 0.0, 1.0), 0.0};
  out.tail_constant = 1.0 / (sr * (sl - 1.0) * std::pow(sl, orbit.k1 - 1));
  return out;
}

BoundingDensities bounding_densities(const WParams& w) {
  require_formula_regime(w, "bounding_densities");
  const auto lambda = lambda_solve(w);
  const auto g = truncated_series(w);
  const double c = chi_weight(w);
  auto combine = [&](double lam, double shift) {
    auto vals = g.g_low.values();
    for (double& v : vals) v = 1.0 + c * lam * (v + shift);
    return PiecewiseConstantDensity(g.g_low.breakpoints(), std::move(vals));
  };
  const BoundPair which = classify_case(w.s1, w.s2) == Case::II ? BoundPair::CaseII : BoundPair::CaseIII;
  if (lambda.Lambda < 0.0) {
    return {combine(lambda.Lambda_l, g.tail_constant), combine(lambda.Lambda_h, 0.0), which};
  }
  return {combine(lambda.Lambda_l, 0.0), combine(lambda.Lambda_h, g.tail_constant), which};
}

PiecewiseConstantDensity truncated_upper_density(const WParams& w) {
  require_formula_regime(w, "truncated_upper_density");
  const auto lambda = lambda_solve(w);
  const auto g = truncated_series(w);
  auto vals = g.g_low.values();
  for (double& v : vals) v = 1.0 + chi_weight(w) * lambda.Lambda_h * v;
  return {g.g_low.breakpoints(), std::move(vals)};
}

PiecewiseConstantDensity h0(double s1, double s2) {
  if (classify_case(s1, s2) == Case::I) throw PreconditionError("h0 requires 1/s1 + 1/s2 <= 1");
  const double den = 2.0 * s1 * s2 + s1 - s2;
  return {{0.0, 0.5, 1.0}, {2.0 * s1 * (s2 + 1.0) / den, 2.0 * s2 * (s1 - 1.0) / den}};
}

RegionIntegrals region_integrals(const WParams& w, const PiecewiseConstantDensity& f) {
  const auto orbit = turning_orbit(w);
  RegionIntegrals out;
  out.j1_right = orbit.orbit[orbit.k1 - 1];
  out.j2_right = w.peak();
  out.C1 = f.integral_over(0.0, out.j1_right);
  out.C2 = f.integral_over(out.j1_right, out.j2_right);
  out.C3 = f.integral_over(out.j2_right, 1.0);
  out.B = out.C1 + out.C2 + out.C3;
  return out;
}

PiecewiseConstantDensity transfer_operator_apply(const PiecewiseLinearMap& map, const PiecewiseConstantDensity& f) {
  std::vector<double> pts{0.0, 1.0};
  const auto& fb = f.breakpoints();
  for (std::size_t b = 0; b < map.branch_count(); ++b) {
    const double d0 = map.breakpoints()[b], d1 = map.breakpoints()[b + 1];
    const auto [lo, hi] = map.branch_image(b);
    pts.push_back(lo);
    pts.push_back(hi);
    for (auto it = std::upper_bound(fb.begin(), fb.end(), d0); it != fb.end() && *it < d1; ++it) {
      pts.push_back(map.eval_on_branch(b, *it));
    }
  }
  std::vector<double> grid;
  for (double x : pts) grid.push_back(std::clamp(x, 0.0, 1.0));
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  const std::size_t cells = grid.size() - 1;
  std::vector<double> vals(cells, 0.0);
#pragma omp parallel for schedule(static)
  for (std::size_t i = 0; i < cells; ++i) {
    const double y = 0.5 * (grid[i] + grid[i + 1]);
    double acc = 0.0;
    for (std::size_t b = 0; b < map.branch_count(); ++b) {
      const auto [lo, hi] = map.branch_image(b);
      if (y <= lo || y >= hi) continue;
      const double x = map.inverse_on_branch(b, y);
      acc += f.value_at(x) / std::abs(map.slopes()[b]);
    }
    vals[i] = acc;
  }
  return {std::move(grid), std::move(vals)};
}

RenormalizedDensity renormalized_density_vartheta0(const WParams& w, double tail_tol) {
  require_formula_regime(w, "renormalized_density_vartheta0");
  if (!(std::abs(vartheta(w.s1, w.s2)) < 1e-9) || classify_case(w.s1, w.s2) != Case::III) {
    throw PreconditionError("renormalized_density_vartheta0 requires vartheta = 0 and 1/s1 + 1/s2 < 1");
  }
  const auto map = build_w_map(w);
  const auto terms = series_terms(map, w, std::min(1e-12, tail_tol));
  const auto s = s_matrix(terms, w);
  const double inv_lambda = 1.0 - s.S11 - s.S22;
  const auto density_terms = series_terms(map, w, tail_tol / chi_weight(w));

  const double sl = w.left_slope(), sr = w.right_slope();
  const double kappa = (sl + sr) / (sl * sr);
  const double eta = (sl + sr) / (sr * sr * (sl - 1.0));
  const double inv_lambda_h = 1.0 - (kappa + eta);
  const auto orbit = turning_orbit(w);

  RenormalizedDensity out{series_step_function(density_terms, inv_lambda, chi_weight(w)), inv_lambda,
                          kappa + inv_lambda_h, eta * (1.0 - std::pow(sl, -(orbit.k1 - 1))) + inv_lambda_h};
  return out;
}

PiecewiseConstantDensity normalized_gora_density(const WParams& w, double tail_tol) {
  validate(w);
  if (w.a == 0.0) return h0(w.s1, w.s2);
  require_formula_regime(w, "normalized_gora_density");
  const auto map = build_w_map(w);
  const auto terms = series_terms(map, w, std::min(1e-12, tail_tol));
  const auto s = s_matrix(terms, w);
  // (1/Lambda) f_a has the same normalization as f_a and stays finite when
  // Lambda does not.
  const double inv_lambda = 1.0 - s.S11 - s.S22;
  const auto density_terms = series_terms(map, w, tail_tol / chi_weight(w));
  return normalize(series_step_function(density_terms, inv_lambda, chi_weight(w)));
}

}  // namespace acimlab
