#include "subflow/calculus.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "subflow/error.hpp"
#include "subflow/parallel.hpp"

namespace subflow {
namespace {

// w[k] = V((k+1) h) - V(k h) = int_{kh}^{(k+1)h} nu(s) ds, k = 0 .. n-1.
std::vector<double> kernel_weights(const BernsteinSpec& spec, double h, std::size_t n) {
  std::vector<double> w(n);
  double prev = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double next = eval_tail_primitive(spec, static_cast<double>(k + 1) * h);
    w[k] = next - prev;
    prev = next;
  }
  return w;
}

std::vector<double> slopes(const GridFunction& u) {
  std::vector<double> d(u.size() - 1);
  for (std::size_t j = 0; j + 1 < u.size(); ++j) d[j] = (u[j + 1] - u[j]) / u.step();
  return d;
}

void prepare(const BernsteinSpec& spec, const GridFunction& u) {
  u.require_valid();
  require_valid(spec);
}

}  // namespace

std::vector<double> finite_difference(const GridFunction& u) {
  const std::size_t n = u.size();
  const double h = u.step();
  std::vector<double> d(n);
  if (n < 3) {
    std::fill(d.begin(), d.end(), n == 2 ? (u[1] - u[0]) / h : 0.0);
    return d;
  }
  d[0] = (-3.0 * u[0] + 4.0 * u[1] - u[2]) / (2.0 * h);
  for (std::size_t i = 1; i + 1 < n; ++i) d[i] = (u[i + 1] - u[i - 1]) / (2.0 * h);
  d[n - 1] = (3.0 * u[n - 1] - 4.0 * u[n - 2] + u[n - 3]) / (2.0 * h);
  return d;
}

GridFunction caputo_derivative(const BernsteinSpec& spec, const GridFunction& u) {
  prepare(spec, u);
  const std::size_t n = u.size();
  const auto w = kernel_weights(spec, u.step(), n - 1);
  const auto d = slopes(u);
  const auto du = finite_difference(u);
  std::vector<double> out(n);
  parallel_for(
      n,
      [&](std::size_t i) {
        // sum_{j < i} d_j (V(t_i - t_j) - V(t_i - t_{j+1}))
        double acc = 0.0;
        for (std::size_t j = 0; j < i; ++j) acc += d[j] * w[i - 1 - j];
        out[i] = spec.b * du[i] + acc;
      },
      512);
  return GridFunction(u.origin(), u.step(), std::move(out));
}

GridFunction rl_derivative(const BernsteinSpec& spec, const GridFunction& u) {
  GridFunction out = caputo_derivative(spec, u);
  const double u0 = u[0];
  for (std::size_t i = 1; i < u.size(); ++i) {
    out[i] += eval_tail(spec, u.x(i) - u.origin()) * u0;
  }
  const double nu0 = tail_at_zero(spec);
  if (std::isinf(nu0)) {
    out[0] = 0.0;
    out.set_missing(0);
  } else {
    out[0] += nu0 * u0;
  }
  return out;
}

GridFunction weyl_derivative(const BernsteinSpec& spec, const GridFunction& u,
                             WeylDirection direction, const CalculusOptions& opts) {
  prepare(spec, u);
  const std::size_t n = u.size();
  const double h = u.step();
  const double width = u.back_x() - u.origin();

  // Kernel support actually used: cut where nu falls to the cutoff (only
  // possible without killing).
  std::size_t reach = n - 1;
  double cut_tail = 0.0;
  if (spec.a <= opts.tail_cutoff_tol) {
    for (std::size_t k = 1; k < n; ++k) {
      const double nu = eval_tail(spec, static_cast<double>(k) * h);
      if (nu <= opts.tail_cutoff_tol) {
        reach = k;
        cut_tail = nu;
        break;
      }
    }
  }
  const auto w = kernel_weights(spec, h, n - 1);
  const auto d = slopes(u);
  const auto du = finite_difference(u);

  const auto [lo_it, hi_it] = std::minmax_element(u.values().begin(), u.values().end());
  const double range = *hi_it - *lo_it;
  const double edge_slope = std::max(std::abs(d.front()), std::abs(d.back()));
  const double remainder = eval_tail_primitive(spec, width) * edge_slope + cut_tail * range;
  const double scale = u.sup_norm();
  if (remainder > opts.window_tol * scale) {
    std::ostringstream os;
    os << "estimated remainder " << remainder << " exceeds " << opts.window_tol
       << " * |u|_inf; widen the window";
    fail(ErrorKind::WindowTooNarrow, os.str());
  }

  std::vector<double> out(n);
  const bool plus = direction == WeylDirection::Plus;
  parallel_for(
      n,
      [&](std::size_t i) {
        double acc = 0.0;
        if (plus) {
          const std::size_t j0 = i > reach ? i - reach : 0;
          for (std::size_t j = j0; j < i; ++j) acc += d[j] * w[i - 1 - j];
          out[i] = spec.b * du[i] + acc;
        } else {
          const std::size_t j1 = std::min(n - 1, i + reach);
          for (std::size_t j = i; j < j1; ++j) acc += d[j] * w[j - i];
          out[i] = -(spec.b * du[i] + acc);
        }
      },
      512);
  return GridFunction(u.origin(), h, std::move(out));
}

double laplace_transform(const GridFunction& u, double lambda) {
  const double h = u.step();
  const double x = lambda * h;
  // Per-segment integrals of e^{-lambda tau} and tau e^{-lambda tau} over [0, h].
  const double e0 = -std::expm1(-x) / lambda;
  const double e1 = (-std::expm1(-x) - x * std::exp(-x)) / (lambda * lambda);
  double acc = 0.0;
  for (std::size_t j = 0; j + 1 < u.size(); ++j) {
    const double slope = (u[j + 1] - u[j]) / h;
    acc += std::exp(-lambda * u.x(j)) * (u[j] * e0 + slope * e1);
  }
  return acc;
}

double laplace_symbol_check(const BernsteinSpec& spec, const GridFunction& u,
                            std::span<const double> lambdas) {
  const double horizon = u.back_x() - u.origin();
  for (double l : lambdas) {
    if (!(l > 0.0)) fail(ErrorKind::DomainError, "Laplace variable must be positive");
    if (l * horizon < 30.0) {
      std::ostringstream os;
      os << "lambda * T = " << l * horizon << " < 30; the grid truncation is not negligible";
      fail(ErrorKind::TruncationTooLarge, os.str());
    }
  }
  const GridFunction du = caputo_derivative(spec, u);
  double worst = 0.0;
  for (double l : lambdas) {
    const double f = eval_f(spec, l);
    const double ut = laplace_transform(u, l);
    const double expected = f * ut - f / l * std::exp(-l * u.origin()) * u[0];
    const double got = laplace_transform(du, l);
    worst = std::max(worst, std::abs(got - expected) / std::abs(f * ut));
  }
  return worst;
}

}  // namespace subflow
