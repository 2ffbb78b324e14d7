#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <type_traits>
#include <vector>

namespace subflow::quad {

// Sup-norm magnitude for the integrand value types used in this library.
inline double magnitude(double v) { return std::abs(v); }
inline double magnitude(const std::complex<double>& v) { return std::abs(v); }
template <class Derived>
double magnitude(const Eigen::MatrixBase<Derived>& v) {
  return v.size() == 0 ? 0.0 : v.template lpNorm<Eigen::Infinity>();
}

struct Options {
  double abs_tol = 0.0;
  double rel_tol = 1e-10;
  int max_panels = 4000;
};

template <class T>
struct Result {
  T value;
  double error = 0.0;
  bool converged = false;
  int evaluations = 0;
};

namespace detail {

// 15-point Kronrod extension of the 7-point Gauss rule on [-1, 1].
inline constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss weights for the odd-indexed Kronrod nodes (1, 3, 5, 7).
inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <class T>
struct Panel {
  double a;
  double b;
  T value;
  double error;
  bool operator<(const Panel& other) const { return error < other.error; }
};

template <class F>
auto gauss_kronrod_15(F& f, double a, double b) {
  using T = std::decay_t<decltype(f(a))>;
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  T fc = f(center);
  T kronrod = fc * kKronrodWeights[7];
  T gauss = fc * kGaussWeights[3];
  for (int i = 0; i < 7; ++i) {
    const double dx = half * kKronrodNodes[i];
    T f1 = f(center - dx);
    T f2 = f(center + dx);
    T pair = f1 + f2;
    kronrod += pair * kKronrodWeights[i];
    if (i % 2 == 1) gauss += pair * kGaussWeights[i / 2];
  }
  T value = kronrod * half;
  T diff = (kronrod - gauss) * half;
  return Panel<T>{a, b, value, magnitude(diff)};
}

}  // namespace detail

/// Globally adaptive Gauss-Kronrod (G7/K15) quadrature on a finite interval.
/// T may be double, std::complex<double> or an Eigen vector; the error
/// control uses the sup-norm of the integrand values.
template <class F>
auto integrate(F&& f, double a, double b, const Options& opts = {}) {
  using T = std::decay_t<decltype(f(a))>;
  Result<T> result{};
  if (a == b) {
    result.value = f(a) * 0.0;
    result.converged = true;
    result.evaluations = 1;
    return result;
  }
  std::vector<detail::Panel<T>> panels;
  panels.push_back(detail::gauss_kronrod_15(f, a, b));
  result.evaluations = 15;
  T total = panels.front().value;
  double total_error = panels.front().error;
  auto resum = [&] {
    total = panels.front().value;
    total_error = panels.front().error;
    for (std::size_t i = 1; i < panels.size(); ++i) {
      total += panels[i].value;
      total_error += panels[i].error;
    }
  };
  while (true) {
    const double target = std::max(opts.abs_tol, opts.rel_tol * magnitude(total));
    if (total_error <= target) {
      resum();  // incremental updates may drift; confirm with an exact sum
      if (total_error <= std::max(opts.abs_tol, opts.rel_tol * magnitude(total))) {
        result.converged = true;
        break;
      }
    }
    if (static_cast<int>(panels.size()) >= opts.max_panels) break;
    std::pop_heap(panels.begin(), panels.end());
    auto worst = panels.back();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      std::push_heap(panels.begin(), panels.end());
      break;  // interval exhausted at machine resolution
    }
    panels.pop_back();
    auto left = detail::gauss_kronrod_15(f, worst.a, mid);
    auto right = detail::gauss_kronrod_15(f, mid, worst.b);
    result.evaluations += 30;
    total += left.value + right.value - worst.value;
    total_error += left.error + right.error - worst.error;
    panels.push_back(left);
    std::push_heap(panels.begin(), panels.end());
    panels.push_back(right);
    std::push_heap(panels.begin(), panels.end());
  }
  resum();
  result.value = total;
  result.error = total_error;
  return result;
}

/// Integrates over consecutive panels [breaks[i], breaks[i+1]], each adaptively,
/// with a shared relative tolerance. Useful when the integrand has known scales.
template <class F>
auto integrate_breaks(F&& f, const std::vector<double>& breaks, const Options& opts = {}) {
  using T = std::decay_t<decltype(f(breaks.front()))>;
  Result<T> out{};
  out.converged = true;
  bool first = true;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    auto piece = integrate(f, breaks[i], breaks[i + 1], opts);
    if (first) {
      out.value = piece.value;
      first = false;
    } else {
      out.value += piece.value;
    }
    out.error += piece.error;
    out.evaluations += piece.evaluations;
    out.converged = out.converged && piece.converged;
  }
  return out;
}

}  // namespace subflow::quad
