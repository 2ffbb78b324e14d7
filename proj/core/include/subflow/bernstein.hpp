#pragma once

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace subflow {

/// Real type used where extended precision is mandatory (Gaver-Stehfest).
using ExtendedReal = boost::multiprecision::cpp_bin_float_50;

/// f(x) = x^alpha.
struct Stable {
  double alpha = 0.5;
};

/// f(x) = (x + theta)^alpha - theta^alpha.
struct TemperedStable {
  double alpha = 0.5;
  double theta = 1.0;
};

/// No Levy measure: f(x) = a + b x.
struct PureDrift {};

/// Levy tail nu(s) given on knots and interpolated piecewise linearly in
/// log-log coordinates. The table is the full tail, killing included.
class CustomTail {
 public:
  CustomTail() = default;
  /// Stores the table as given; structural problems are reported by validate().
  CustomTail(std::vector<double> knots, std::vector<double> values, double killing);

  std::span<const double> knots() const { return knots_; }
  std::span<const double> values() const { return values_; }
  double killing() const { return killing_; }

  double tail(double s) const;
  double primitive(double s) const;

  /// Log-log slope of the first segment; governs behaviour as s -> 0.
  double leading_exponent() const { return slopes_.empty() ? 0.0 : slopes_.front(); }
  bool integrable_at_zero() const { return leading_exponent() > -1.0; }
  bool unbounded_at_zero() const { return leading_exponent() < 0.0; }
  bool well_formed() const { return well_formed_; }

 private:
  double segment_integral(std::size_t i, double lo, double hi) const;

  std::vector<double> knots_;
  std::vector<double> values_;
  std::vector<double> slopes_;      // log-log slope per segment; [0] also used below knots_[0]
  std::vector<double> cumulative_;  // primitive at each knot
  double killing_ = 0.0;
  bool well_formed_ = false;
};

using Family = std::variant<Stable, TemperedStable, PureDrift, CustomTail>;

/// Levy triplet (a, b, nu-bar) of a Bernstein function; nu-bar is carried by
/// a closed-form family or a tabulated tail.
struct BernsteinSpec {
  double a = 0.0;  // killing rate
  double b = 0.0;  // drift
  Family family = PureDrift{};

  static BernsteinSpec stable(double alpha, double a = 0.0, double b = 0.0);
  static BernsteinSpec tempered(double alpha, double theta, double a = 0.0, double b = 0.0);
  static BernsteinSpec drift(double a, double b);
  /// The custom table must already include the killing rate a (values >= a).
  static BernsteinSpec custom(std::vector<double> knots, std::vector<double> values,
                              double a = 0.0, double b = 0.0);
};

enum class Violation {
  NegativeKilling,
  NegativeDrift,
  AlphaOutOfRange,
  ThetaNonPositive,
  DegenerateExponent,
  KnotsNotIncreasing,
  TailNotMonotone,
  TailBelowKilling,
  TailNotIntegrableAtZero,
};

std::string_view to_string(Violation v) noexcept;

/// Empty iff the triplet satisfies every structural condition the library relies on.
std::vector<Violation> validate(const BernsteinSpec& spec);

/// Throws SpecInvalid listing the violations, if any.
void require_valid(const BernsteinSpec& spec);

/// f(lambda) for Re(lambda) > 0.
std::complex<double> eval_f(const BernsteinSpec& spec, std::complex<double> lambda);
double eval_f(const BernsteinSpec& spec, double lambda);

/// nu(s) = a + nu-bar(s, inf) for s > 0.
double eval_tail(const BernsteinSpec& spec, double s);

/// V(s) = int_0^s nu(w) dw for s >= 0.
double eval_tail_primitive(const BernsteinSpec& spec, double s);

/// nu(0+) (may be +inf).
double tail_at_zero(const BernsteinSpec& spec);

/// nu-bar(0, inf) = inf, i.e. the subordinator is strictly increasing by jumps.
bool has_infinite_activity(const BernsteinSpec& spec);

/// True if f has a closed form that continues analytically off the positive half-plane.
bool has_closed_form(const BernsteinSpec& spec);

/// f(lambda) - b lambda, the pure-jump part (killing included), analytically
/// continued to C minus the family's branch cut. Requires has_closed_form()
/// unless Re(lambda) > 0.
std::complex<double> jump_exponent(const BernsteinSpec& spec, std::complex<double> lambda);

/// f(lambda) - b lambda in extended precision for real lambda > 0.
ExtendedReal jump_exponent(const BernsteinSpec& spec, const ExtendedReal& lambda);

}  // namespace subflow
