#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "acimlab/density.hpp"
#include "acimlab/map_core.hpp"

namespace acimlab {

/// One point of an a -> 0 sweep.
struct SweepRecord {
  double a = 0.0;
  Case regime = Case::III;
  double d_to_limit = 0.0;
  /// (C1/a, C2/a, C3/a, B/a) of the invariant density; only for 1/s1 + 1/s2 = 1.
  std::optional<std::array<double, 4>> C_over_a;
  double sup_density = 0.0;
  double essinf_density = 0.0;
  int k = 0;  // stopping index of the turning orbit, 0 when undefined
  std::string error;  // non-empty when this point failed
};

struct SweepOptions {
  std::size_t ulam_bins = 1u << 14;  // case I only
  double tail_tol = 1e-10;
};

/// Normalized invariant density of W_a: formula-based when 1/s1 + 1/s2 <= 1,
/// otherwise Ulam's method on the trapping interval [x*_l, x*_r].
PiecewiseConstantDensity invariant_density(const WParams& params, const SweepOptions& opts = {});

/// Throws ParameterError unless the schedule is non-empty and strictly decreasing.
void check_schedule(const std::vector<double>& a_schedule);

/// Parallel over schedule points. Per-point failures are stored in the record.
std::vector<SweepRecord> sweep(const WParams& params0, const std::vector<double>& a_schedule,
                               const SweepOptions& opts = {});

/// Limits of C1/a, C2/a, C3/a, B/a as a -> 0 for 1/s1 + 1/s2 = 1.
std::array<double, 4> ratio_targets(const WParams& params0);

struct RatioRow {
  double a;
  std::array<double, 4> ratios;   // C1/a, C2/a, C3/a, B/a
  std::array<double, 4> targets;
};

struct RatioReport {
  std::vector<RatioRow> rows;
  /// Per column: absolute error to the target shrinks at every step.
  std::array<bool, 4> monotone{};
};

/// Throws PreconditionError outside 1/s1 + 1/s2 = 1.
RatioReport asymptotic_ratio_report(const WParams& params0, const std::vector<double>& a_schedule);

struct UniformBoundReport {
  double sup_over_sweep = 0.0;
  std::vector<double> per_a;  // sup of the normalized density, schedule order
  bool growth_flag = false;   // last value exceeds twice the median
};

/// Throws PreconditionError outside 1/s1 + 1/s2 < 1.
UniformBoundReport uniform_bound_check(const WParams& params0, const std::vector<double>& a_schedule);

struct CounterexampleRow {
  int n = 0;
  double r_n = 0.0;
  double a_n = 0.0;
  double d_n = 0.0;
  double essinf_n = 0.0;
};

/// s1 = s2 = 2, p = q = 1, r_n = n. For each n, halves a from 0.1/n until the
/// invariant measure is within 1/n of its a -> 0 limit. Throws ConvergenceError
/// carrying the smallest distance reached when 40 halvings are not enough.
std::vector<CounterexampleRow> counterexample_sequence(int n_max);

/// Geometric or linear grid from start to stop (inclusive).
std::vector<double> a_grid(double start, double stop, std::size_t points, bool log_spacing = true);

}  // namespace acimlab
