#include "subflow/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>

#include "subflow/error.hpp"
#include "subflow/laplace.hpp"
#include "subflow/parallel.hpp"
#include "subflow/quadrature.hpp"

namespace subflow {
namespace {

constexpr std::size_t kMaxGrid = 200'000;

std::vector<double> renewal_at(const BernsteinSpec& spec, const std::vector<double>& xs,
                               const InversionConfig& cfg) {
  std::vector<double> out(xs.size(), 0.0);
  parallel_for(
      xs.size(),
      [&](std::size_t i) {
        if (xs[i] > 0.0) out[i] = renewal(spec, xs[i], RenewalMode::Function, cfg);
      },
      64);
  return out;
}

using Orders = std::vector<int>;

// One evaluation of the recursion with h = (smallest active time) / steps.
double moment_on_grid(const BernsteinSpec& spec, const std::vector<double>& times,
                      const Orders& orders, std::size_t steps, const InversionConfig& cfg) {
  const std::size_t n = times.size();
  double t_min = std::numeric_limits<double>::infinity();
  double t_max = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (orders[i] == 0) continue;
    t_min = std::min(t_min, times[i]);
    t_max = std::max(t_max, times[i]);
  }
  const double h = t_min / static_cast<double>(steps);
  const std::size_t top = static_cast<std::size_t>(std::ceil(t_max / h)) + 2;
  if (top > kMaxGrid) {
    fail(ErrorKind::DomainError, "time ratio too large for a shared tau grid");
  }

  std::vector<double> nodes(top);
  for (std::size_t k = 0; k < top; ++k) nodes[k] = static_cast<double>(k) * h;
  const std::vector<double> u_grid = renewal_at(spec, nodes, cfg);
  // u_shift[i][k] = U(t_i - k h), exact at off-grid points.
  std::vector<std::vector<double>> u_shift(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (orders[i] == 0) continue;
    std::vector<double> xs(top);
    for (std::size_t k = 0; k < top; ++k) xs[k] = times[i] - static_cast<double>(k) * h;
    u_shift[i] = renewal_at(spec, xs, cfg);
  }

  // Every sub-multiset of the orders, by increasing total order.
  std::vector<Orders> tuples{Orders(n, 0)};
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t count = tuples.size();
    for (int m = 1; m <= orders[i]; ++m) {
      for (std::size_t c = 0; c < count; ++c) {
        Orders o = tuples[c];
        o[i] = m;
        tuples.push_back(o);
      }
    }
  }
  auto total = [](const Orders& o) { return std::accumulate(o.begin(), o.end(), 0); };
  std::stable_sort(tuples.begin(), tuples.end(),
                   [&](const Orders& x, const Orders& y) { return total(x) < total(y); });

  std::map<Orders, std::vector<double>> table;
  for (const Orders& m : tuples) {
    std::vector<double> f(top, 0.0);
    const int order = total(m);
    if (order == 0) {
      std::fill(f.begin(), f.end(), 1.0);
    } else if (order == 1) {
      const auto i = static_cast<std::size_t>(std::find(m.begin(), m.end(), 1) - m.begin());
      f = u_shift[i];
    } else {
      std::vector<const std::vector<double>*> lower(n, nullptr);
      for (std::size_t i = 0; i < n; ++i) {
        if (m[i] == 0) continue;
        Orders o = m;
        --o[i];
        lower[i] = &table.at(o);
      }
      auto g = [&](std::size_t idx) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          if (lower[i] != nullptr) s += m[i] * (*lower[i])[idx];
        }
        return s;
      };
      for (std::size_t k = 0; k < top; ++k) {
        double end = std::numeric_limits<double>::infinity();
        std::size_t lead = 0;
        for (std::size_t i = 0; i < n; ++i) {
          if (m[i] == 0) continue;
          const double r = times[i] - static_cast<double>(k) * h;
          if (r < end) {
            end = r;
            lead = i;
          }
        }
        if (end <= 0.0) continue;
        auto full = static_cast<std::size_t>(std::floor(end / h));
        full = std::min(full, top - 2 - k);
        double acc = 0.0;
        double g_prev = g(k);
        for (std::size_t l = 0; l < full; ++l) {
          const double g_next = g(k + l + 1);
          acc += 0.5 * (g_prev + g_next) * (u_grid[l + 1] - u_grid[l]);
          g_prev = g_next;
        }
        const double frac = end / h - static_cast<double>(full);
        if (frac > 0.0 && k + full + 1 < top) {
          const double g_end = g_prev + frac * (g(k + full + 1) - g_prev);
          acc += 0.5 * (g_prev + g_end) * (u_shift[lead][k] - u_grid[full]);
        }
        f[k] = acc;
      }
    }
    table.emplace(m, std::move(f));
  }
  return table.at(orders)[0];
}

void require_refined(double coarse, double fine, double tol, const char* what) {
  if (std::abs(fine - coarse) > tol * std::abs(fine)) {
    std::ostringstream os;
    os << what << " changed from " << coarse << " to " << fine << " when the grid was halved";
    fail(ErrorKind::GridTooCoarse, os.str());
  }
}

// E[L(t) L(t+s)] on a tau grid with `steps` panels across [0, t].
class CovarianceKernel {
 public:
  CovarianceKernel(const BernsteinSpec& spec, double t, std::size_t steps,
                   const InversionConfig& cfg)
      : spec_(spec), t_(t), steps_(steps), cfg_(cfg), h_(t / static_cast<double>(steps)) {
    std::vector<double> nodes(steps + 1);
    for (std::size_t k = 0; k <= steps; ++k) nodes[k] = static_cast<double>(k) * h_;
    nodes.back() = t;
    u_ = renewal_at(spec, nodes, cfg);
    // int_0^t U(t - tau) U(d tau) uses only grid values.
    for (std::size_t k = 0; k < steps; ++k) {
      diagonal_ += 0.5 * (u_[steps - k] + u_[steps - k - 1]) * (u_[k + 1] - u_[k]);
    }
  }

  double operator()(double s) const {
    std::vector<double> xs(steps_ + 1);
    for (std::size_t k = 0; k <= steps_; ++k) xs[k] = t_ + s - static_cast<double>(k) * h_;
    xs.back() = s;
    const auto shifted = renewal_at(spec_, xs, cfg_);
    double acc = diagonal_;
    for (std::size_t k = 0; k < steps_; ++k) {
      acc += 0.5 * (shifted[k] + shifted[k + 1]) * (u_[k + 1] - u_[k]);
    }
    return acc;
  }

  double renewal_at_t() const { return u_.back(); }

 private:
  BernsteinSpec spec_;
  double t_;
  std::size_t steps_;
  InversionConfig cfg_;
  double h_;
  std::vector<double> u_;
  double diagonal_ = 0.0;
};

}  // namespace

RenewalGrid RenewalGrid::build(const BernsteinSpec& spec, double step, double horizon,
                               const InversionConfig& cfg) {
  if (!(step > 0.0) || !(horizon > 0.0)) {
    fail(ErrorKind::DomainError, "renewal grid needs step > 0 and horizon > 0");
  }
  const auto n = static_cast<std::size_t>(std::floor(horizon / step + 1e-9)) + 1;
  std::vector<double> xs(n);
  for (std::size_t k = 0; k < n; ++k) xs[k] = static_cast<double>(k) * step;
  return RenewalGrid{step, horizon, renewal_at(spec, xs, cfg)};
}

std::vector<double> RenewalGrid::increments() const {
  std::vector<double> d(values.empty() ? 0 : values.size() - 1);
  for (std::size_t k = 0; k < d.size(); ++k) d[k] = values[k + 1] - values[k];
  return d;
}

double mixed_moment(const BernsteinSpec& spec, std::span<const double> times,
                    std::span<const int> orders, const MomentOptions& opts) {
  require_valid(spec);
  if (times.size() != orders.size() || times.empty()) {
    fail(ErrorKind::DomainError, "times and orders must be non-empty and of equal length");
  }
  if (times.size() > 3) fail(ErrorKind::DomainError, "at most 3 times are supported");
  int order = 0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!(times[i] > 0.0)) fail(ErrorKind::DomainError, "times must be > 0");
    if (orders[i] < 0) fail(ErrorKind::DomainError, "orders must be >= 0");
    order += orders[i];
  }
  if (order > 4) fail(ErrorKind::DomainError, "total order must be <= 4");
  if (order == 0) return 1.0;
  const std::vector<double> t(times.begin(), times.end());
  const Orders m(orders.begin(), orders.end());
  if (order == 1) {
    const auto i = static_cast<std::size_t>(std::find(m.begin(), m.end(), 1) - m.begin());
    return renewal(spec, t[i], RenewalMode::Function, opts.inversion);
  }
  const double coarse = moment_on_grid(spec, t, m, opts.steps, opts.inversion);
  const double fine = moment_on_grid(spec, t, m, 2 * opts.steps, opts.inversion);
  require_refined(coarse, fine, opts.refine_tol, "mixed moment");
  return fine;
}

Covariance covariance(const BernsteinSpec& spec, double t, double s, const MomentOptions& opts) {
  require_valid(spec);
  if (!(t > 0.0) || !(s >= 0.0)) fail(ErrorKind::DomainError, "covariance needs t > 0, s >= 0");
  const CovarianceKernel coarse(spec, t, opts.steps, opts.inversion);
  const CovarianceKernel fine(spec, t, 2 * opts.steps, opts.inversion);
  const double c = coarse(s);
  const double f = fine(s);
  require_refined(c, f, opts.refine_tol, "E[L(t) L(t+s)]");
  const double u_ts = renewal(spec, t + s, RenewalMode::Function, opts.inversion);
  return {f, f - fine.renewal_at_t() * u_ts};
}

RatioRange renewal_bound_check(const BernsteinSpec& spec, std::span<const double> x_grid,
                               const InversionConfig& cfg) {
  require_valid(spec);
  RatioRange r{std::numeric_limits<double>::infinity(), 0.0, false};
  for (double x : x_grid) {
    if (!(x > 0.0)) fail(ErrorKind::DomainError, "grid points must be > 0");
    const double ratio = 1.0 / (eval_f(spec, 1.0 / x) * renewal(spec, x, RenewalMode::Function, cfg));
    r.min_ratio = std::min(r.min_ratio, ratio);
    r.max_ratio = std::max(r.max_ratio, ratio);
  }
  r.passed = !x_grid.empty() && r.min_ratio > 0.0 && std::isfinite(r.max_ratio);
  return r;
}

std::vector<std::pair<double, double>> subadditivity_check(
    const BernsteinSpec& spec, std::span<const std::pair<double, double>> pairs,
    const InversionConfig& cfg) {
  require_valid(spec);
  std::vector<std::pair<double, double>> bad;
  for (const auto& [x, y] : pairs) {
    if (!(x > 0.0) || !(y > 0.0)) fail(ErrorKind::DomainError, "pairs must be positive");
    const double sum = renewal(spec, x + y, RenewalMode::Function, cfg);
    const double parts = renewal(spec, x, RenewalMode::Function, cfg) +
                         renewal(spec, y, RenewalMode::Function, cfg);
    if (sum > parts + 1e-8 * sum) bad.emplace_back(x, y);
  }
  return bad;
}

LongRangeReport long_range_diagnostic(const BernsteinSpec& spec, double t, double w,
                                      std::span<const double> horizons,
                                      const MomentOptions& opts) {
  require_valid(spec);
  if (!(t > 0.0) || !(w > 0.0)) fail(ErrorKind::DomainError, "t and w must be > 0");
  for (std::size_t i = 0; i < horizons.size(); ++i) {
    if (!(horizons[i] > (i == 0 ? w : horizons[i - 1]))) {
      fail(ErrorKind::DomainError, "horizons must increase and exceed w");
    }
  }
  const CovarianceKernel kernel(spec, t, opts.steps, opts.inversion);
  LongRangeReport rep;
  rep.horizons.assign(horizons.begin(), horizons.end());
  quad::Options q;
  q.rel_tol = 1e-8;
  double acc = 0.0;
  double lo = w;
  rep.min_integrand = kernel(w);
  for (double hi : horizons) {
    acc += quad::integrate(kernel, lo, hi, q).value;
    rep.integrals.push_back(acc);
    rep.integrand.push_back(kernel(hi));
    rep.min_integrand = std::min(rep.min_integrand, rep.integrand.back());
    lo = hi;
  }
  rep.strictly_increasing = rep.min_integrand > 0.0;
  for (std::size_t i = 1; i < rep.integrals.size(); ++i) {
    rep.strictly_increasing = rep.strictly_increasing && rep.integrals[i] > rep.integrals[i - 1];
  }
  rep.increments_non_decreasing = true;
  std::vector<double> slopes;
  double prev_i = 0.0;
  double prev_s = w;
  double prev_inc = 0.0;
  for (std::size_t i = 0; i < rep.integrals.size(); ++i) {
    const double inc = rep.integrals[i] - prev_i;
    if (i > 0 && inc < prev_inc) rep.increments_non_decreasing = false;
    slopes.push_back(inc / (rep.horizons[i] - prev_s));
    prev_inc = inc;
    prev_i = rep.integrals[i];
    prev_s = rep.horizons[i];
  }
  rep.slope_holds = !slopes.empty() && slopes.back() >= 0.9 * slopes.front();
  rep.passed = rep.strictly_increasing && rep.increments_non_decreasing && rep.slope_holds;
  return rep;
}

}  // namespace subflow
