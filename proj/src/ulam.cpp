#include "acimlab/ulam.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "acimlab/error.hpp"

namespace acimlab {

namespace {

using RowEntries = std::vector<std::pair<std::size_t, double>>;

// Exact preimage measure of every target bin inside source bin i.
void ulam_row(const PiecewiseLinearMap& map, const std::vector<double>& edges, std::size_t i, RowEntries& out) {
  out.clear();
  const double u0 = edges[i], u1 = edges[i + 1];
  const double width = u1 - u0;
  const double lo = edges.front(), hi = edges.back();
  const auto& bp = map.breakpoints();
  for (std::size_t b = 0; b < map.branch_count(); ++b) {
    const double x0 = std::max(u0, bp[b]);
    const double x1 = std::min(u1, bp[b + 1]);
    if (!(x1 > x0)) continue;
    double y0 = map.eval_on_branch(b, x0);
    double y1 = map.eval_on_branch(b, x1);
    if (y0 > y1) std::swap(y0, y1);
    y0 = std::max(y0, lo);
    y1 = std::min(y1, hi);
    if (!(y1 > y0)) continue;
    const double scale = 1.0 / (std::abs(map.slopes()[b]) * width);
    auto j = static_cast<std::size_t>(std::upper_bound(edges.begin(), edges.end(), y0) - edges.begin());
    j = j == 0 ? 0 : j - 1;
    for (; j + 1 < edges.size() && edges[j] < y1; ++j) {
      const double overlap = std::min(y1, edges[j + 1]) - std::max(y0, edges[j]);
      if (overlap > 0.0) out.emplace_back(j, overlap * scale);
    }
  }
  std::sort(out.begin(), out.end());
  std::size_t w = 0;
  for (std::size_t r = 0; r < out.size(); ++r) {
    if (w > 0 && out[w - 1].first == out[r].first) {
      out[w - 1].second += out[r].second;
    } else {
      out[w++] = out[r];
    }
  }
  out.resize(w);
  double sum = 0.0;
  for (const auto& e : out) sum += e.second;
  if (sum > 0.0) {
    for (auto& e : out) e.second /= sum;
  }
}

void check_grid(std::size_t n_bins, const UlamGrid& grid) {
  if (n_bins < 2) throw ParameterError("ulam: n_bins >= 2 required");
  if (!(grid.lo >= 0.0 && grid.hi <= 1.0 && grid.lo < grid.hi)) {
    throw ParameterError("ulam: grid must satisfy 0 <= lo < hi <= 1");
  }
  if (grid.align_half && !(grid.lo < 0.5 && 0.5 < grid.hi)) {
    throw ParameterError("ulam: align_half needs lo < 1/2 < hi");
  }
}

std::vector<double> initial_mass(const UlamMatrix& m) {
  std::vector<double> mass(m.n_bins);
  const double total = m.edges.back() - m.edges.front();
  for (std::size_t i = 0; i < m.n_bins; ++i) mass[i] = (m.edges[i + 1] - m.edges[i]) / total;
  return mass;
}

// Renormalizes next to unit mass and returns the L1 step. Serial so the
// result does not depend on the thread count.
double finish_step(std::vector<double>& next, const std::vector<double>& prev) {
  double total = 0.0;
  for (double v : next) total += v;
  double step = 0.0;
  for (std::size_t i = 0; i < next.size(); ++i) {
    next[i] /= total;
    step += std::abs(next[i] - prev[i]);
  }
  return step;
}

}  // namespace

std::vector<double> ulam_edges(std::size_t n_bins, const UlamGrid& grid) {
  check_grid(n_bins, grid);
  std::vector<double> edges(n_bins + 1);
  auto fill = [&](std::size_t first, std::size_t count, double a, double b) {
    for (std::size_t i = 0; i <= count; ++i) {
      edges[first + i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(count);
    }
  };
  if (grid.align_half) {
    const std::size_t left = n_bins / 2;
    fill(0, left, grid.lo, 0.5);
    fill(left, n_bins - left, 0.5, grid.hi);
  } else {
    fill(0, n_bins, grid.lo, grid.hi);
  }
  edges.front() = grid.lo;
  edges.back() = grid.hi;
  return edges;
}

double UlamMatrix::entry(std::size_t i, std::size_t j) const {
  const auto first = col.begin() + static_cast<std::ptrdiff_t>(row_ptr[i]);
  const auto last = col.begin() + static_cast<std::ptrdiff_t>(row_ptr[i + 1]);
  const auto it = std::lower_bound(first, last, j);
  if (it == last || *it != j) return 0.0;
  return val[static_cast<std::size_t>(it - col.begin())];
}

double UlamMatrix::row_sum(std::size_t i) const {
  double s = 0.0;
  for (std::size_t e = row_ptr[i]; e < row_ptr[i + 1]; ++e) s += val[e];
  return s;
}

UlamMatrix build_ulam(const PiecewiseLinearMap& map, std::size_t n_bins, const UlamGrid& grid) {
  UlamMatrix m;
  m.n_bins = n_bins;
  m.edges = ulam_edges(n_bins, grid);
  std::vector<RowEntries> rows(n_bins);
#pragma omp parallel
  {
    RowEntries scratch;
#pragma omp for schedule(static)
    for (std::size_t i = 0; i < n_bins; ++i) {
      ulam_row(map, m.edges, i, scratch);
      rows[i] = scratch;
    }
  }
  m.row_ptr.assign(n_bins + 1, 0);
  for (std::size_t i = 0; i < n_bins; ++i) m.row_ptr[i + 1] = m.row_ptr[i] + rows[i].size();
  m.col.resize(m.row_ptr.back());
  m.val.resize(m.row_ptr.back());
#pragma omp parallel for schedule(static)
  for (std::size_t i = 0; i < n_bins; ++i) {
    std::size_t e = m.row_ptr[i];
    for (const auto& [j, v] : rows[i]) {
      m.col[e] = j;
      m.val[e] = v;
      ++e;
    }
  }
  return m;
}

StationaryResult stationary_vector(const UlamMatrix& m, const StationaryOptions& opts) {
  // Column-major copy so each output entry is a private gather.
  const std::size_t n = m.n_bins;
  std::vector<std::size_t> col_ptr(n + 1, 0);
  for (std::size_t j : m.col) ++col_ptr[j + 1];
  for (std::size_t j = 0; j < n; ++j) col_ptr[j + 1] += col_ptr[j];
  std::vector<std::size_t> row_idx(m.col.size());
  std::vector<double> tval(m.col.size());
  {
    auto fill = col_ptr;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t e = m.row_ptr[i]; e < m.row_ptr[i + 1]; ++e) {
        const std::size_t slot = fill[m.col[e]]++;
        row_idx[slot] = i;
        tval[slot] = m.val[e];
      }
    }
  }

  StationaryResult res;
  res.mass = initial_mass(m);
  std::vector<double> next(n);
  for (std::size_t it = 1; it <= opts.max_iters; ++it) {
#pragma omp parallel for schedule(static)
    for (std::size_t j = 0; j < n; ++j) {
      double acc = 0.0;
      for (std::size_t e = col_ptr[j]; e < col_ptr[j + 1]; ++e) acc += res.mass[row_idx[e]] * tval[e];
      next[j] = acc;
    }
    res.last_step = finish_step(next, res.mass);
    res.mass.swap(next);
    res.iterations = it;
    if (res.last_step < opts.tol) return res;
  }
  throw ConvergenceError("stationary_density: no convergence within max_iters (last L1 step " +
                             std::to_string(res.last_step) + ")",
                         res.last_step);
}

PiecewiseConstantDensity mass_to_density(const UlamMatrix& m, const std::vector<double>& mass) {
  std::vector<double> bps;
  std::vector<double> vals;
  if (m.edges.front() > 0.0) {
    bps.push_back(0.0);
    vals.push_back(0.0);
  }
  for (std::size_t i = 0; i < m.n_bins; ++i) {
    bps.push_back(m.edges[i]);
    vals.push_back(mass[i] / (m.edges[i + 1] - m.edges[i]));
  }
  bps.push_back(m.edges.back());
  if (m.edges.back() < 1.0) {
    vals.push_back(0.0);
    bps.push_back(1.0);
  }
  return {std::move(bps), std::move(vals)};
}

PiecewiseConstantDensity stationary_density(const UlamMatrix& m, const StationaryOptions& opts) {
  return mass_to_density(m, stationary_vector(m, opts).mass);
}

namespace reference {

UlamMatrix build_ulam(const PiecewiseLinearMap& map, std::size_t n_bins, const UlamGrid& grid) {
  UlamMatrix m;
  m.n_bins = n_bins;
  m.edges = ulam_edges(n_bins, grid);
  m.row_ptr.push_back(0);
  RowEntries row;
  for (std::size_t i = 0; i < n_bins; ++i) {
    ulam_row(map, m.edges, i, row);
    for (const auto& [j, v] : row) {
      m.col.push_back(j);
      m.val.push_back(v);
    }
    m.row_ptr.push_back(m.col.size());
  }
  return m;
}

StationaryResult stationary_vector(const UlamMatrix& m, const StationaryOptions& opts) {
  StationaryResult res;
  res.mass = initial_mass(m);
  std::vector<double> next(m.n_bins);
  for (std::size_t it = 1; it <= opts.max_iters; ++it) {
    std::fill(next.begin(), next.end(), 0.0);
    for (std::size_t i = 0; i < m.n_bins; ++i) {
      for (std::size_t e = m.row_ptr[i]; e < m.row_ptr[i + 1]; ++e) next[m.col[e]] += res.mass[i] * m.val[e];
    }
    res.last_step = finish_step(next, res.mass);
    res.mass.swap(next);
    res.iterations = it;
    if (res.last_step < opts.tol) return res;
  }
  throw ConvergenceError("stationary_density: no convergence within max_iters", res.last_step);
}

}  // namespace reference

}  // namespace acimlab
