#pragma once

#include <span>
#include <utility>
#include <vector>

#include "subflow/bernstein.hpp"
#include "subflow/inversion.hpp"

namespace subflow {

/// U(k h), k = 0 .. floor(horizon / h), with U(0) = 0.
struct RenewalGrid {
  double step = 0.0;
  double horizon = 0.0;
  std::vector<double> values;

  static RenewalGrid build(const BernsteinSpec& spec, double step, double horizon,
                           const InversionConfig& cfg = {});
  /// dU_k = U((k+1) h) - U(k h).
  std::vector<double> increments() const;
};

struct MomentOptions {
  /// Steps across the smallest time; the result is confirmed on twice as many.
  std::size_t steps = 512;
  double refine_tol = 1e-3;
  InversionConfig inversion{InversionMethod::Talbot, 40, 32, false};
};

/// E[L(t_1)^{m_1} ... L(t_n)^{m_n}] from the renewal recursion
///   U(t; m) = int_0^{min t} sum_i m_i U(t - tau; m - e_i) U(d tau)
/// with trapezoidal Stieltjes sums on a shared tau grid. n <= 3, sum m <= 4.
/// Throws GridTooCoarse if doubling the grid moves the result by more than
/// refine_tol (relative); otherwise returns the finer value.
double mixed_moment(const BernsteinSpec& spec, std::span<const double> times,
                    std::span<const int> orders, const MomentOptions& opts = {});

struct Covariance {
  double second_moment = 0.0;  // E[L(t) L(t + s)]
  double covariance = 0.0;     // minus U(t) U(t + s)
};

/// E[L(t) L(t+s)] = int_0^t (U(t - tau) + U(t + s - tau)) U(d tau).
Covariance covariance(const BernsteinSpec& spec, double t, double s,
                      const MomentOptions& opts = {});

struct RatioRange {
  double min_ratio = 0.0;
  double max_ratio = 0.0;
  bool passed = false;  // 0 < min <= max < inf
};

/// Extremes of r(x) = 1 / (f(1/x) U(x)) over the grid.
RatioRange renewal_bound_check(const BernsteinSpec& spec, std::span<const double> x_grid,
                               const InversionConfig& cfg = {});

/// Pairs (x, y) with U(x + y) > U(x) + U(y) + 1e-8 U(x + y).
std::vector<std::pair<double, double>> subadditivity_check(
    const BernsteinSpec& spec, std::span<const std::pair<double, double>> pairs,
    const InversionConfig& cfg = {});

struct LongRangeReport {
  std::vector<double> horizons;    // S
  std::vector<double> integrals;   // I(S) = int_w^S E[L(t) L(t+s)] ds
  std::vector<double> integrand;   // E[L(t) L(t+S)]
  double min_integrand = 0.0;
  bool strictly_increasing = false;
  bool increments_non_decreasing = false;
  bool slope_holds = false;  // last segment slope >= 0.9 x first
  bool passed = false;
};

LongRangeReport long_range_diagnostic(const BernsteinSpec& spec, double t, double w,
                                      std::span<const double> horizons,
                                      const MomentOptions& opts = {});

}  // namespace subflow
