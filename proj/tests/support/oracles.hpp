#pragma once

// Closed forms and brute-force quadratures used as independent references.
// Nothing here calls into the library.

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/erf.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <vector>

namespace oracle {

inline constexpr double pi = std::numbers::pi;

// Levy(1/2) law of sigma(t) for f = sqrt(lambda).
inline double levy_density(double t, double x) {
  if (x <= 0.0) return 0.0;
  return t * std::exp(-t * t / (4.0 * x)) / (2.0 * std::sqrt(pi) * std::pow(x, 1.5));
}

// Density of L(t) for f = sqrt(lambda): half-normal with variance 2t.
inline double inverse_stable_half(double t, double s) {
  return std::exp(-s * s / (4.0 * t)) / std::sqrt(pi * t);
}

inline double stable_tail(double alpha, double s) {
  return std::pow(s, -alpha) / std::tgamma(1.0 - alpha);
}

inline double stable_renewal(double alpha, double x) {
  return std::pow(x, alpha) / std::tgamma(1.0 + alpha);
}

// nu(s) = alpha / Gamma(1 - alpha) int_s^inf e^{-theta z} z^{-alpha-1} dz by quadrature.
inline double tempered_tail(double alpha, double theta, double s) {
  boost::math::quadrature::exp_sinh<double> q;
  auto g = [&](double z) { return std::exp(-theta * (z + s)) * std::pow(z + s, -alpha - 1.0); };
  return alpha / std::tgamma(1.0 - alpha) * q.integrate(g, 0.0, std::numeric_limits<double>::infinity());
}

// E_{1/2}(-sqrt(t)) = e^t erfc(sqrt(t)); fine for the t <= 50 used here.
inline double mittag_leffler_half(double t) {
  if (t <= 0.0) return 1.0;
  return std::exp(t) * std::erfc(std::sqrt(t));
}

// E_alpha(z) by its power series, summed until terms fall below 1e-16.
inline double mittag_leffler_series(double alpha, double z) {
  double sum = 0.0;
  for (int k = 0; k < 400; ++k) {
    const double term = std::pow(z, k) / std::tgamma(1.0 + alpha * k);
    if (!std::isfinite(term)) break;
    sum += term;
    if (k > 5 && std::abs(term) < 1e-17 * std::max(1.0, std::abs(sum))) break;
  }
  return sum;
}

// Integral over [0, inf) of a density given pointwise; split at `knee` with
// tanh-sinh below and exp-sinh above.
template <class F>
double total_mass(F&& density, double knee) {
  boost::math::quadrature::tanh_sinh<double> ts;
  boost::math::quadrature::exp_sinh<double> es;
  const double lower = ts.integrate(density, 0.0, knee);
  const double upper = es.integrate([&](double z) { return density(knee + z); }, 0.0,
                                    std::numeric_limits<double>::infinity());
  return lower + upper;
}

// Integral of a density over [e^umin, e^umax] in the log variable.
template <class F>
double log_mass(F&& density, double umin, double umax) {
  auto g = [&](double u) {
    const double x = std::exp(u);
    return density(x) * x;
  };
  // 1e-8 sits just above the inversion noise floor; tighter requests only recurse
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(g, umin, umax, 12, 1e-8);
}

inline double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

// Kolmogorov-Smirnov distance of sorted samples to a continuous CDF.
template <class Cdf>
double ks_distance(std::vector<double> samples, Cdf&& cdf) {
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double F = cdf(samples[i]);
    d = std::max({d, std::abs(F - static_cast<double>(i) / n), std::abs(static_cast<double>(i + 1) / n - F)});
  }
  return d;
}

}  // namespace oracle
