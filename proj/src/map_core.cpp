#include "acimlab/map_core.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <sstream>

#include "acimlab/error.hpp"

namespace acimlab {

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

void require(bool ok, const std::string& inequality, const std::string& detail) {
  if (!ok) throw ParameterError("parameter check failed: " + inequality + " (" + detail + ")");
}

struct Fraction {
  std::int64_t num;
  std::int64_t den;
};

// Smallest-denominator fraction that rounds to exactly x, if one exists with
// a modest denominator.
std::optional<Fraction> as_simple_fraction(double x) {
  constexpr std::int64_t kMaxDen = 1000000;
  if (!std::isfinite(x) || x <= 0.0 || x > 1e9) return std::nullopt;
  std::int64_t h0 = 0, h1 = 1, k0 = 1, k1 = 0;
  double rest = x;
  for (int it = 0; it < 64; ++it) {
    const double fl = std::floor(rest);
    const auto ai = static_cast<std::int64_t>(fl);
    const std::int64_t h2 = ai * h1 + h0;
    const std::int64_t k2 = ai * k1 + k0;
    if (k2 > kMaxDen) break;
    h0 = h1; h1 = h2; k0 = k1; k1 = k2;
    if (static_cast<double>(h1) / static_cast<double>(k1) == x) return Fraction{h1, k1};
    const double frac = rest - fl;
    if (frac <= 0.0) break;
    rest = 1.0 / frac;
  }
  return std::nullopt;
}

}  // namespace

void validate(const WParams& w) {
  for (double v : {w.s1, w.s2, w.p, w.q, w.r, w.a}) {
    require(std::isfinite(v), "all parameters finite", "got " + fmt(v));
  }
  require(w.s1 > 1.0, "s1 > 1", "s1 = " + fmt(w.s1));
  require(w.s2 > 1.0, "s2 > 1", "s2 = " + fmt(w.s2));
  require(w.p > 0.0, "p > 0", "p = " + fmt(w.p));
  require(w.q > 0.0, "q > 0", "q = " + fmt(w.q));
  require(w.r > 0.0, "r > 0", "r = " + fmt(w.r));
  require(w.a >= 0.0, "a >= 0", "a = " + fmt(w.a));
  require(w.r * w.a < 0.5, "r*a < 1/2", "r*a = " + fmt(w.r * w.a));
  // First and fourth branches must stay inside [0,1]; equivalently the outer
  // breakpoints lie strictly inside (0, 1/2) and (1/2, 1).
  require(w.s1 - 1.0 + w.p * w.a - 2.0 * w.r * w.a > 0.0, "s1 - 1 + p*a - 2*r*a > 0 (0 <= W_a <= 1)",
          "value = " + fmt(w.s1 - 1.0 + w.p * w.a - 2.0 * w.r * w.a));
  require(w.s2 - 1.0 + w.q * w.a - 2.0 * w.r * w.a > 0.0, "s2 - 1 + q*a - 2*r*a > 0 (0 <= W_a <= 1)",
          "value = " + fmt(w.s2 - 1.0 + w.q * w.a - 2.0 * w.r * w.a));
}

double max_valid_a(double s1, double s2, double p, double q, double r) {
  double bound = 0.5 / r;
  if (2.0 * r > p) bound = std::min(bound, (s1 - 1.0) / (2.0 * r - p));
  if (2.0 * r > q) bound = std::min(bound, (s2 - 1.0) / (2.0 * r - q));
  return bound;
}

std::string to_string(Case c) {
  switch (c) {
    case Case::I: return "I";
    case Case::II: return "II";
    case Case::III: return "III";
  }
  return "?";
}

Case classify_case(double s1, double s2) {
  const auto f1 = as_simple_fraction(s1);
  const auto f2 = as_simple_fraction(s2);
  if (f1 && f2) {
    // 1/s1 + 1/s2 = d1/n1 + d2/n2 compared with 1.
    const __int128 lhs = static_cast<__int128>(f1->den) * f2->num +
                         static_cast<__int128>(f2->den) * f1->num;
    const __int128 rhs = static_cast<__int128>(f1->num) * f2->num;
    if (lhs > rhs) return Case::I;
    if (lhs == rhs) return Case::II;
    return Case::III;
  }
  const double sum = 1.0 / s1 + 1.0 / s2;
  if (std::abs(sum - 1.0) <= 1e-12) return Case::II;
  return sum > 1.0 ? Case::I : Case::III;
}

PiecewiseLinearMap::PiecewiseLinearMap(std::vector<double> breakpoints, std::vector<double> slopes,
                                       std::vector<double> intercepts)
    : PiecewiseLinearMap(std::move(breakpoints), slopes, [&] {
        std::vector<Anchor> anchors;
        for (double c : intercepts) anchors.push_back({0.0, c});
        return anchors;
      }()) {
  if (intercepts.size() != slopes_.size()) {
    throw ParameterError("piecewise linear map: one intercept per branch required");
  }
}

PiecewiseLinearMap::PiecewiseLinearMap(std::vector<double> breakpoints, std::vector<double> slopes,
                                       std::vector<Anchor> anchors)
    : breakpoints_(std::move(breakpoints)), slopes_(std::move(slopes)), anchors_(std::move(anchors)) {
  if (slopes_.empty() || breakpoints_.size() != slopes_.size() + 1 || anchors_.size() != slopes_.size()) {
    throw ParameterError("piecewise linear map: need N branches, N+1 breakpoints and N anchors");
  }
  if (breakpoints_.front() != 0.0 || breakpoints_.back() != 1.0) {
    throw ParameterError("piecewise linear map: breakpoints must start at 0 and end at 1");
  }
  for (std::size_t i = 0; i + 1 < breakpoints_.size(); ++i) {
    if (!(breakpoints_[i] < breakpoints_[i + 1])) {
      throw ParameterError("piecewise linear map: breakpoints must be strictly increasing");
    }
  }
  for (double s : slopes_) {
    if (!(std::abs(s) > 1.0)) throw ParameterError("piecewise linear map: |slope| > 1 required");
  }
}

std::vector<double> PiecewiseLinearMap::intercepts() const {
  std::vector<double> out(slopes_.size());
  for (std::size_t i = 0; i < slopes_.size(); ++i) out[i] = anchors_[i].y - slopes_[i] * anchors_[i].x;
  return out;
}

std::size_t PiecewiseLinearMap::branch_of(double x) const {
  // upper_bound over the interior breakpoints gives left-closed branches.
  const auto first = breakpoints_.begin() + 1;
  const auto last = breakpoints_.end() - 1;
  return static_cast<std::size_t>(std::upper_bound(first, last, x) - first);
}

double PiecewiseLinearMap::eval(double x) const {
  if (!(x >= 0.0 && x <= 1.0)) throw DomainError("eval: x = " + fmt(x) + " outside [0,1]");
  return eval_on_branch(branch_of(x), x);
}

std::pair<double, double> PiecewiseLinearMap::branch_image(std::size_t b) const {
  const double y0 = eval_on_branch(b, breakpoints_[b]);
  const double y1 = eval_on_branch(b, breakpoints_[b + 1]);
  return {std::min(y0, y1), std::max(y0, y1)};
}

double PiecewiseLinearMap::min_abs_slope() const {
  double m = std::numeric_limits<double>::infinity();
  for (double s : slopes_) m = std::min(m, std::abs(s));
  return m;
}

std::pair<double, double> PiecewiseLinearMap::one_sided_limits(std::size_t i) const {
  if (i == 0 || i + 1 >= breakpoints_.size()) {
    throw DomainError("one_sided_limits: not an interior breakpoint index");
  }
  const double x = breakpoints_[i];
  return {eval_on_branch(i - 1, x), eval_on_branch(i, x)};
}

PiecewiseLinearMap build_w_map(const WParams& w) {
  validate(w);
  const double sl = w.left_slope();
  const double sr = w.right_slope();
  const double top = w.peak();
  const double b1 = 0.5 - top / sl;
  const double b3 = 0.5 + top / sr;
  std::vector<double> slopes{
      -2.0 * sl / (w.s1 - 1.0 + w.p * w.a - 2.0 * w.r * w.a),
      sl,
      -sr,
      2.0 * sr / (w.s2 - 1.0 + w.q * w.a - 2.0 * w.r * w.a),
  };
  std::vector<PiecewiseLinearMap::Anchor> anchors{{0.0, 1.0}, {0.5, top}, {0.5, top}, {1.0, 1.0}};
  PiecewiseLinearMap map({0.0, b1, 0.5, b3, 1.0}, std::move(slopes), std::move(anchors));

  // Range validity at the breakpoints suffices for a piecewise linear map.
  for (std::size_t b = 0; b < map.branch_count(); ++b) {
    const auto [lo, hi] = map.branch_image(b);
    if (lo < -1e-12 || hi > 1.0 + 1e-12) {
      throw ParameterError("parameter check failed: 0 <= W_a(x) <= 1 on branch " + std::to_string(b + 1));
    }
  }
  return map;
}

std::vector<double> iterate(const PiecewiseLinearMap& map, double x, std::size_t n) {
  std::vector<double> orbit;
  orbit.reserve(n + 1);
  orbit.push_back(x);
  for (std::size_t i = 0; i < n; ++i) orbit.push_back(map.eval(orbit.back()));
  return orbit;
}

std::pair<int, int> turning_point_branches() { return {2, 3}; }

FixedPoints fixed_points(const WParams& w) {
  validate(w);
  const double s1 = w.s1, s2 = w.s2, p = w.p, q = w.q, r = w.r, a = w.a;
  FixedPoints fp{};
  fp.x_star_l = (s1 - 1.0 + p * a - 2.0 * r * a) / (2.0 * (s1 - 1.0 + p * a));
  fp.x_star_r = (s2 * s1 - s2 + (2.0 * r * s1 - q + p * s2 + q * s1) * a + (2.0 * r * p + p * q) * a * a) /
                (2.0 * (s1 - 1.0 + p * a) * (s2 + q * a));
  return fp;
}

InvariantIntervalReport invariant_interval_check(const WParams& w) {
  if (classify_case(w.s1, w.s2) != Case::I) {
    throw PreconditionError("invariant_interval_check requires case I (1/s1 + 1/s2 > 1)");
  }
  const auto map = build_w_map(w);
  const auto fp = fixed_points(w);
  const double lo = fp.x_star_l, hi = fp.x_star_r;
  InvariantIntervalReport rep{};
  rep.interval = {lo, hi};
  rep.sign_wa_half_minus_xr = map.eval(0.5) - hi;
  // On [x*_l, x*_r] the map is a tent with peak at 1/2; its image is
  // [min(W(x*_l), W(x*_r)), W(1/2)]. Fixed-point values carry rounding only.
  constexpr double kRound = 1e-12;
  const double img_hi = (lo <= 0.5 && 0.5 <= hi) ? map.eval(0.5) : std::max(map.eval(lo), map.eval(hi));
  const double img_lo = std::min(map.eval(lo), map.eval(hi));
  rep.contained = lo < hi && img_lo >= lo - kRound && img_hi <= hi + kRound;
  return rep;
}

}  // namespace acimlab
