#include "acimlab/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "acimlab/error.hpp"
#include "acimlab/gora_density.hpp"
#include "acimlab/measure.hpp"
#include "acimlab/ulam.hpp"

namespace acimlab {

namespace {

constexpr int kMaxHalvings = 40;

// Support of the case-I measure is [W^2(1/2), W(1/2)]; one bin is trimmed on
// each side so partially covered Ulam cells do not count.
double case_one_essinf(const WParams& w, const PiecewiseConstantDensity& f, std::size_t bins) {
  const auto map = build_w_map(w);
  const double top = map.eval(0.5);
  const double bottom = map.eval(top);
  const auto fp = fixed_points(w);
  const double h = (fp.x_star_r - fp.x_star_l) / static_cast<double>(bins);
  return f.essinf(bottom + h, top - h);
}

SweepRecord sweep_point(const WParams& w, const SweepOptions& opts) {
  SweepRecord rec;
  rec.a = w.a;
  rec.regime = classify_case(w.s1, w.s2);
  try {
    validate(w);
    const auto f = invariant_density(w, opts);
    rec.d_to_limit = wasserstein1(MeasureRepr::absolutely_continuous(f), limit_measure(w.s1, w.s2, w.p, w.q, w.r));
    rec.sup_density = f.sup();
    if (rec.regime == Case::I) {
      rec.essinf_density = case_one_essinf(w, f, opts.ulam_bins);
    } else {
      rec.essinf_density = f.essinf();
      if (w.a > 0.0) rec.k = turning_orbit(w).k;
    }
    if (rec.regime == Case::II && w.a > 0.0) {
      const auto c = region_integrals(w, density_series(w, opts.tail_tol));
      rec.C_over_a = std::array<double, 4>{c.C1 / w.a, c.C2 / w.a, c.C3 / w.a, c.B / w.a};
    }
  } catch (const std::exception& e) {
    rec.error = e.what();
  }
  return rec;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

PiecewiseConstantDensity invariant_density(const WParams& w, const SweepOptions& opts) {
  validate(w);
  if (classify_case(w.s1, w.s2) != Case::I) return normalized_gora_density(w, opts.tail_tol);
  const auto fp = fixed_points(w);
  const auto m = build_ulam(build_w_map(w), opts.ulam_bins, UlamGrid{fp.x_star_l, fp.x_star_r, false});
  return normalize(stationary_density(m));
}

void check_schedule(const std::vector<double>& s) {
  if (s.empty()) throw ParameterError("a_schedule: must not be empty");
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (!(s[i] >= 0.0) || !std::isfinite(s[i])) throw ParameterError("a_schedule: entries must be finite and >= 0");
    if (i > 0 && !(s[i] < s[i - 1])) throw ParameterError("a_schedule: must be strictly decreasing");
  }
}

std::vector<SweepRecord> sweep(const WParams& params0, const std::vector<double>& a_schedule,
                               const SweepOptions& opts) {
  check_schedule(a_schedule);
  for (double a : a_schedule) validate(params0.with_a(a));
  std::vector<SweepRecord> out(a_schedule.size());
  const auto n = static_cast<long>(a_schedule.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (long i = 0; i < n; ++i) {
    out[static_cast<std::size_t>(i)] = sweep_point(params0.with_a(a_schedule[static_cast<std::size_t>(i)]), opts);
  }
  return out;
}

std::array<double, 4> ratio_targets(const WParams& w) {
  const double s1 = w.s1, s2 = w.s2, p = w.p, q = w.q, r = w.r;
  const double c1 = -(2.0 * q * s1 + p * s2 * s2 - p - q) / (2.0 * s1 * s2);
  const double c2 = -r * s2;
  const double c3 = -(q * s1 + p * s2 - p - q) / (2.0 * s1 * s2);
  return {c1, c2, c3, c1 + c2 + c3};
}

RatioReport asymptotic_ratio_report(const WParams& params0, const std::vector<double>& a_schedule) {
  if (classify_case(params0.s1, params0.s2) != Case::II) {
    throw PreconditionError("asymptotic_ratio_report requires 1/s1 + 1/s2 = 1");
  }
  check_schedule(a_schedule);
  const auto targets = ratio_targets(params0);
  RatioReport rep;
  rep.rows.resize(a_schedule.size());
  const auto n = static_cast<long>(a_schedule.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (long i = 0; i < n; ++i) {
    const double a = a_schedule[static_cast<std::size_t>(i)];
    const WParams w = params0.with_a(a);
    const auto c = region_integrals(w, density_series(w));
    rep.rows[static_cast<std::size_t>(i)] = {a, {c.C1 / a, c.C2 / a, c.C3 / a, c.B / a}, targets};
  }
  for (std::size_t col = 0; col < 4; ++col) {
    bool ok = true;
    for (std::size_t i = 1; i < rep.rows.size(); ++i) {
      const double prev = std::abs(rep.rows[i - 1].ratios[col] - targets[col]);
      const double cur = std::abs(rep.rows[i].ratios[col] - targets[col]);
      ok = ok && cur < prev;
    }
    rep.monotone[col] = ok;
  }
  return rep;
}

UniformBoundReport uniform_bound_check(const WParams& params0, const std::vector<double>& a_schedule) {
  if (classify_case(params0.s1, params0.s2) != Case::III) {
    throw PreconditionError("uniform_bound_check requires 1/s1 + 1/s2 < 1");
  }
  check_schedule(a_schedule);
  UniformBoundReport rep;
  rep.per_a.resize(a_schedule.size());
  const auto n = static_cast<long>(a_schedule.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (long i = 0; i < n; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    rep.per_a[idx] = normalized_gora_density(params0.with_a(a_schedule[idx])).sup();
  }
  rep.sup_over_sweep = *std::max_element(rep.per_a.begin(), rep.per_a.end());
  rep.growth_flag = rep.per_a.back() > 2.0 * median(rep.per_a);
  return rep;
}

std::vector<CounterexampleRow> counterexample_sequence(int n_max) {
  if (n_max < 1) throw ParameterError("counterexample: n_max >= 1 required");
  std::vector<CounterexampleRow> rows(static_cast<std::size_t>(n_max));
  std::vector<std::string> failures(rows.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (int n = 1; n <= n_max; ++n) {
    const WParams base{2.0, 2.0, 1.0, 1.0, static_cast<double>(n), 0.0};
    const auto limit = limit_measure(2.0, 2.0, 1.0, 1.0, base.r);
    const double target = 1.0 / n;
    double best = std::numeric_limits<double>::infinity();
    auto& row = rows[static_cast<std::size_t>(n - 1)];
    row.n = n;
    row.r_n = base.r;
    bool found = false;
    for (int m = 0; m <= kMaxHalvings && !found; ++m) {
      const double a = std::ldexp(0.1 / n, -m);
      if (!(base.r * a < 0.5)) continue;
      const auto f = normalized_gora_density(base.with_a(a));
      const double d = wasserstein1(MeasureRepr::absolutely_continuous(f), limit);
      best = std::min(best, d);
      if (d < target) {
        row.a_n = a;
        row.d_n = d;
        row.essinf_n = f.essinf();
        found = true;
      }
    }
    if (!found) failures[static_cast<std::size_t>(n - 1)] = std::to_string(best);
  }
  for (std::size_t i = 0; i < failures.size(); ++i) {
    if (!failures[i].empty()) {
      throw ConvergenceError("counterexample: no a_n found for n = " + std::to_string(i + 1) +
                                 " (smallest distance " + failures[i] + ")",
                             std::stod(failures[i]));
    }
  }
  return rows;
}

std::vector<double> a_grid(double start, double stop, std::size_t points, bool log_spacing) {
  if (points == 0) throw ParameterError("a grid: points >= 1 required");
  if (points == 1) return {start};
  if (log_spacing && !(start > 0.0 && stop > 0.0)) throw ParameterError("a grid: log spacing needs positive ends");
  std::vector<double> out(points);
  for (std::size_t i = 0; i < points; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(points - 1);
    out[i] = log_spacing ? std::exp(std::log(start) + t * (std::log(stop) - std::log(start)))
                         : start + t * (stop - start);
  }
  out.front() = start;
  out.back() = stop;
  return out;
}

}  // namespace acimlab
