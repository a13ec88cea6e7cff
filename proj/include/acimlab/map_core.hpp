#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace acimlab {

/// The six scalars defining one member of the W-map family.
struct WParams {
  double s1 = 2.0;
  double s2 = 2.0;
  double p = 1.0;
  double q = 1.0;
  double r = 1.0;
  double a = 0.0;

  double left_slope() const { return s1 + p * a; }    // s1 + pa
  double right_slope() const { return s2 + q * a; }   // s2 + qa
  double peak() const { return 0.5 + r * a; }         // W_a(1/2)
  WParams with_a(double new_a) const {
    WParams out = *this;
    out.a = new_a;
    return out;
  }
};

/// Throws ParameterError naming the first violated inequality.
void validate(const WParams& params);

/// Supremum of admissible perturbation sizes for fixed (s1, s2, p, q, r).
/// Valid maps satisfy 0 <= a < max_valid_a(...). Returns +inf if unbounded.
double max_valid_a(double s1, double s2, double p, double q, double r);

enum class Case { I, II, III };

std::string to_string(Case c);

/// Case I if 1/s1 + 1/s2 > 1, II if equal, III if less.
/// Equality is decided exactly when both inputs are short binary fractions
/// (which covers every decimal-rational input a user types), otherwise with
/// a 1e-12 tolerance.
Case classify_case(double s1, double s2);

/// A continuous or discontinuous interval map that is affine on each branch.
/// Branch i covers [breakpoints[i], breakpoints[i+1]) and the last branch is
/// closed at 1.
///
/// Each branch is stored in point-slope form y = y0 + slope * (x - x0) so that
/// the anchor values (W(0), W(1/2), W(1) for the W family) are reproduced
/// without rounding.
class PiecewiseLinearMap {
 public:
  struct Anchor {
    double x;
    double y;
  };

  PiecewiseLinearMap(std::vector<double> breakpoints, std::vector<double> slopes,
                     std::vector<double> intercepts);
  PiecewiseLinearMap(std::vector<double> breakpoints, std::vector<double> slopes,
                     std::vector<Anchor> anchors);

  std::size_t branch_count() const { return slopes_.size(); }
  const std::vector<double>& breakpoints() const { return breakpoints_; }
  const std::vector<double>& slopes() const { return slopes_; }
  std::vector<double> intercepts() const;

  /// Zero-based branch containing x.
  std::size_t branch_of(double x) const;

  /// One-based branch index j(x) in {1..N}.
  int branch_index(double x) const { return static_cast<int>(branch_of(x)) + 1; }

  double eval(double x) const;
  double eval_on_branch(std::size_t branch, double x) const {
    return anchors_[branch].y + slopes_[branch] * (x - anchors_[branch].x);
  }
  double inverse_on_branch(std::size_t branch, double y) const {
    return anchors_[branch].x + (y - anchors_[branch].y) / slopes_[branch];
  }
  /// Image of the closed branch domain, as (low, high).
  std::pair<double, double> branch_image(std::size_t branch) const;

  double min_abs_slope() const;

  /// Left and right limits at an interior breakpoint.
  std::pair<double, double> one_sided_limits(std::size_t interior_breakpoint) const;

 private:
  std::vector<double> breakpoints_;
  std::vector<double> slopes_;
  std::vector<Anchor> anchors_;
};

PiecewiseLinearMap build_w_map(const WParams& params);

/// Orbit x, W(x), ..., W^n(x).
std::vector<double> iterate(const PiecewiseLinearMap& map, double x, std::size_t n);

/// Branches assigned to the two one-sided copies of the turning point 1/2,
/// (j(c1), j(c2)) = (2, 3).
std::pair<int, int> turning_point_branches();

struct FixedPoints {
  double x_star_l;  // fixed point on the second branch
  double x_star_r;  // preimage of x_star_l under the third branch
};

FixedPoints fixed_points(const WParams& params);

struct InvariantIntervalReport {
  bool contained;
  double sign_wa_half_minus_xr;  // W_a(1/2) - x*_r
  std::pair<double, double> interval;
};

/// Requires case I. Checks W_a([x*_l, x*_r]) is inside [x*_l, x*_r].
InvariantIntervalReport invariant_interval_check(const WParams& params);

}  // namespace acimlab
