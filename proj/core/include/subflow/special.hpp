#pragma once

namespace subflow::special {

/// Upper incomplete gamma function Gamma(a, x) = int_x^inf e^{-z} z^{a-1} dz
/// for any real a (including negative, non-integer a) and x > 0.
///
/// Uses a Lentz continued fraction for x >= 1 and, for x < 1, the upward
/// recurrence Gamma(a, x) = (Gamma(a+1, x) - x^a e^{-x}) / a until a > 0.
/// Relative accuracy is about 1e-14 away from underflow.
double upper_incomplete_gamma(double a, double x);

/// Lower incomplete gamma gamma(a, x) for a > 0, x >= 0.
double lower_incomplete_gamma(double a, double x);

}  // namespace subflow::special
