#pragma once

#include <array>
#include <utility>
#include <vector>

#include "acimlab/density.hpp"
#include "acimlab/map_core.hpp"

namespace acimlab {

/// Data of the explicit invariant-density formula for piecewise linear maps,
/// specialised to the W family: four branches, two turning copies of 1/2,
/// no jumps.
struct GoraSetup {
  struct CriticalPoint {
    double x;
    int branch;  // one-based
  };

  int n_branches = 4;
  int n_turning = 2;
  int n_jumps = 0;
  std::array<double, 4> alpha{};
  std::array<double, 4> beta{};
  std::array<double, 4> gamma{};
  std::array<double, 4> digits{};
  CriticalPoint c1{0.5, 2};
  CriticalPoint c2{0.5, 3};
  // Critical points are referred to by their one-based index (1 -> c1, 2 -> c2).
  std::vector<int> upper{1, 2};  // W_u
  std::vector<int> lower{};      // W_l
  std::vector<int> left{2};      // U_l
  std::vector<int> right{1};     // U_r
};

GoraSetup gora_setup(const WParams& params);

/// Orbit of the turning point up to the stopping index k.
struct TurningOrbit {
  std::vector<double> orbit;       // orbit[n-1] = W^n(1/2), n = 1..k
  std::vector<double> cum_slopes;  // cum_slopes[n-1] = beta(1/2, n)
  int k = 0;                       // first n with W^n(1/2) <= 1/2 - (1/2+ra)/(s1+pa)
  int k1 = 0;                      // floor(2k/3)
  int closed_form_k = 0;
};

/// Requires 1/s1 + 1/s2 <= 1 and a > 0. Throws TruncationError if k > max_steps.
TurningOrbit turning_orbit(const WParams& params, int max_steps = 100000);

/// W^m(1/2) from the closed form valid for 1 <= m <= k.
double closed_form_orbit_point(const WParams& params, int m);

/// Stopping index predicted by the closed form alone (no iteration of the map).
int closed_form_stopping_time(const WParams& params);

/// 1 - ((s1+s2)/(s1 s2) + (s1+s2)/(s2^2 (s1-1))); its sign decides the sign of
/// Lambda for small a when 1/s1 + 1/s2 < 1.
double vartheta(double s1, double s2);

struct LambdaData {
  double S11 = 0.0;
  double S22 = 0.0;
  double Lambda = 0.0;           // from the 2x2 system
  double Lambda_from_S11 = 0.0;  // 1 / (1 - (s1+s2+pa+qa)/(s2+qa) * S11)
  double Lambda_l = 0.0;
  double Lambda_h = 0.0;
  double kappa = 0.0;
  double eta = 0.0;
  double vartheta = 0.0;
  double inverse_Lambda = 0.0;  // determinant of the 2x2 system, 1/Lambda
};

/// Throws NearSingularError when the 2x2 system is numerically singular.
LambdaData lambda_solve(const WParams& params, double series_cutoff = 1e-12);

/// Non-normalized invariant density from the turning-point series, continued
/// along the computed orbit until the geometric tail bound drops below tail_tol.
PiecewiseConstantDensity density_series(const WParams& params, double tail_tol = 1e-10);

enum class BoundPair { CaseII, CaseIII };

struct BoundingDensities {
  PiecewiseConstantDensity f_low;
  PiecewiseConstantDensity f_high;
  BoundPair which;
};

/// Step functions bracketing density_series built from the first floor(2k/3)
/// orbit terms plus a geometric tail constant. The pairing of Lambda bounds
/// with truncated sums follows the sign of Lambda so that f_low <= f_a <= f_high.
BoundingDensities bounding_densities(const WParams& params);

/// 1 + (1 + (s1+pa)/(s2+qa)) Lambda_h g_l: the upper truncated form whose
/// region integrals have closed-form limits as a -> 0.
PiecewiseConstantDensity truncated_upper_density(const WParams& params);

/// Sum of the truncated series over the first floor(2k/3) terms, and the
/// geometric tail constant added to it for the upper version.
struct TruncatedSeries {
  PiecewiseConstantDensity g_low;
  double tail_constant;
};

TruncatedSeries truncated_series(const WParams& params);

/// Invariant density of W_0 (two cells split at 1/2).
PiecewiseConstantDensity h0(double s1, double s2);

struct RegionIntegrals {
  double C1 = 0.0;  // over [0, W^{k1}(1/2)]
  double C2 = 0.0;  // over (W^{k1}(1/2), 1/2 + ra]
  double C3 = 0.0;  // over (1/2 + ra, 1]
  double B = 0.0;
  double j1_right = 0.0;
  double j2_right = 0.0;
};

RegionIntegrals region_integrals(const WParams& params, const PiecewiseConstantDensity& f);

/// Exact Perron-Frobenius image of a step function under a piecewise linear map.
PiecewiseConstantDensity transfer_operator_apply(const PiecewiseLinearMap& map, const PiecewiseConstantDensity& f);

struct RenormalizedDensity {
  PiecewiseConstantDensity density;  // (1/Lambda) f_a
  double inverse_Lambda;
  double chi1_coefficient;  // of (1/Lambda_h) times the upper truncated form
  double chic_coefficient;
};

/// For vartheta == 0, where Lambda blows up as a -> 0.
RenormalizedDensity renormalized_density_vartheta0(const WParams& params, double tail_tol = 1e-10);

/// Normalized invariant density for 1/s1 + 1/s2 <= 1 (any a >= 0), choosing
/// the renormalized path automatically when 1 - c*S11 is tiny.
PiecewiseConstantDensity normalized_gora_density(const WParams& params, double tail_tol = 1e-10);

}  // namespace acimlab
