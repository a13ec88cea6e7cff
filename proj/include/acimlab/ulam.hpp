#pragma once

#include <cstddef>
#include <vector>

#include "acimlab/density.hpp"
#include "acimlab/map_core.hpp"

namespace acimlab {

/// Bin layout for Ulam's method.
struct UlamGrid {
  double lo = 0.0;
  double hi = 1.0;
  /// Split the bins between [lo, 1/2] and [1/2, hi] so that 1/2 is an edge.
  bool align_half = false;
};

std::vector<double> ulam_edges(std::size_t n_bins, const UlamGrid& grid);

/// Row-stochastic Ulam matrix in CSR form.
/// Entry (i, j) = |bin_i intersect W^-1(bin_j)| / |bin_i|.
struct UlamMatrix {
  std::size_t n_bins = 0;
  std::vector<double> edges;  // n_bins + 1
  std::vector<std::size_t> row_ptr;
  std::vector<std::size_t> col;
  std::vector<double> val;

  double entry(std::size_t i, std::size_t j) const;
  double row_sum(std::size_t i) const;
};

/// Parallel over rows. The map must send [grid.lo, grid.hi] into itself.
UlamMatrix build_ulam(const PiecewiseLinearMap& map, std::size_t n_bins, const UlamGrid& grid = {});

struct StationaryOptions {
  double tol = 1e-12;
  std::size_t max_iters = 1000000;
};

/// Left fixed vector by power iteration from the uniform vector, returned as a
/// density on [0,1] (zero outside the grid). Parallel gather over columns.
/// Throws ConvergenceError carrying the last L1 step when max_iters is hit.
PiecewiseConstantDensity stationary_density(const UlamMatrix& m, const StationaryOptions& opts = {});

/// Same fixed vector, plus the iteration count, for benchmarking and tests.
struct StationaryResult {
  std::vector<double> mass;
  std::size_t iterations = 0;
  double last_step = 0.0;
};

StationaryResult stationary_vector(const UlamMatrix& m, const StationaryOptions& opts = {});

PiecewiseConstantDensity mass_to_density(const UlamMatrix& m, const std::vector<double>& mass);

/// Serial kernels kept as the reference the parallel ones are tested against.
namespace reference {

UlamMatrix build_ulam(const PiecewiseLinearMap& map, std::size_t n_bins, const UlamGrid& grid = {});
StationaryResult stationary_vector(const UlamMatrix& m, const StationaryOptions& opts = {});

}  // namespace reference

}  // namespace acimlab
