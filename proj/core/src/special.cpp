#include "subflow/special.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <limits>

#include "subflow/error.hpp"

namespace subflow::special {
namespace {

// Modified Lentz evaluation of
//   Gamma(a,x) = e^{-x} x^a / (x+1-a - 1(1-a)/(x+3-a - 2(2-a)/(x+5-a - ...)))
double continued_fraction(double a, double x) {
  // the prefactor alone underflows; the fraction is below 1 for x >= 1
  if (-x + a * std::log(x) < -745.0) return 0.0;
  constexpr double tiny = 1e-300;
  constexpr double eps = 1e-16;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 10000; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < eps) {
      return std::exp(-x + a * std::log(x)) * h;
    }
  }
  fail(ErrorKind::QuadratureFailure, "incomplete gamma continued fraction did not converge");
}

}  // namespace

double upper_incomplete_gamma(double a, double x) {
  if (!(x > 0.0)) fail(ErrorKind::DomainError, "upper_incomplete_gamma requires x > 0");
  if (x >= 1.0) return continued_fraction(a, x);
  if (a > 0.0) return boost::math::tgamma(a, x);
  // Step a up to a positive value, then unwind the recurrence.
  int steps = 0;
  double a_pos = a;
  while (a_pos <= 0.0) {
    a_pos += 1.0;
    ++steps;
  }
  double value = boost::math::tgamma(a_pos, x);
  const double log_x = std::log(x);
  for (int k = 0; k < steps; ++k) {
    const double ak = a_pos - 1.0;
    value = (value - std::exp(ak * log_x - x)) / ak;
    a_pos = ak;
  }
  return value;
}

double lower_incomplete_gamma(double a, double x) {
  if (!(a > 0.0) || x < 0.0) fail(ErrorKind::DomainError, "lower_incomplete_gamma requires a > 0, x >= 0");
  if (x == 0.0) return 0.0;
  return boost::math::tgamma_lower(a, x);
}

}  // namespace subflow::special
