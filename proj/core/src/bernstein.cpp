#include "subflow/bernstein.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "subflow/error.hpp"
#include "subflow/quadrature.hpp"
#include "subflow/special.hpp"

namespace subflow {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

// (x^q - y^q) / q given log x and log y, continuous through q = 0.
double power_difference(double q, double log_x, double log_y) {
  const double d = log_x - log_y;
  if (std::abs(q * d) < 1e-300 || q == 0.0) return d;
  return std::exp(q * log_y) * std::expm1(q * d) / q;
}

double stable_tail(double alpha, double s) {
  return std::pow(s, -alpha) / std::tgamma(1.0 - alpha);
}

double tempered_tail(double alpha, double theta, double s) {
  return alpha * std::pow(theta, alpha) * special::upper_incomplete_gamma(-alpha, theta * s) /
         std::tgamma(1.0 - alpha);
}

std::complex<double> custom_laplace_exponent(const CustomTail& tail, double killing,
                                             std::complex<double> lambda) {
  const auto knots = tail.knots();
  const auto values = tail.values();
  const double p0 = tail.leading_exponent();
  if (!(p0 > -1.0)) fail(ErrorKind::QuadratureFailure, "custom tail is not integrable at zero");

  quad::Options opts;
  opts.rel_tol = 1e-12;
  std::complex<double> integral{0.0, 0.0};
  double error = 0.0;

  // [0, s1] with s = s1 e^u; the integrand decays like e^{u (p0 + 1)}.
  {
    const double s1 = knots.front();
    const double v1 = values.front();
    const double u_min = std::log(1e-18) / (p0 + 1.0);
    auto g = [&](double u) {
      const double s = s1 * std::exp(u);
      return v1 * s1 * std::exp(u * (p0 + 1.0)) * std::exp(-lambda * s);
    };
    auto r = quad::integrate(g, u_min, 0.0, opts);
    integral += r.value;
    error += r.error;
  }
  const double re = lambda.real();
  for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
    const double lo = knots[i];
    const double hi = knots[i + 1];
    // Remaining mass beyond lo is at most nu(lo) e^{-Re(lambda) lo} / Re(lambda).
    const double bound = values[i] * std::exp(-re * lo) / re;
    if (bound < 1e-15 * std::abs(integral)) break;
    auto g = [&](double s) { return tail.tail(s) * std::exp(-lambda * s); };
    opts.abs_tol = 1e-16 * std::abs(integral);
    auto r = quad::integrate(g, lo, hi, opts);
    integral += r.value;
    error += r.error;
  }
  const double scale = std::abs(integral);
  if (!(error <= 1e-10 * scale) && scale > 0.0) {
    std::ostringstream os;
    os << "custom tail Laplace integral error " << error << " exceeds 1e-10 relative";
    fail(ErrorKind::QuadratureFailure, os.str());
  }
  return lambda * integral + killing * std::exp(-lambda * knots.back());
}

}  // namespace

// ---------------------------------------------------------------------------
// CustomTail

CustomTail::CustomTail(std::vector<double> knots, std::vector<double> values, double killing)
    : knots_(std::move(knots)), values_(std::move(values)), killing_(killing) {
  well_formed_ = knots_.size() >= 2 && knots_.size() == values_.size() && knots_.front() > 0.0;
  for (std::size_t i = 0; well_formed_ && i + 1 < knots_.size(); ++i) {
    well_formed_ = knots_[i + 1] > knots_[i];
  }
  for (double v : values_) {
    if (!(v >= 0.0) || !std::isfinite(v)) well_formed_ = false;
  }
  if (!well_formed_) return;

  const std::size_t n = knots_.size();
  slopes_.resize(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (values_[i] > 0.0 && values_[i + 1] > 0.0) {
      slopes_[i] = std::log(values_[i + 1] / values_[i]) / std::log(knots_[i + 1] / knots_[i]);
    } else {
      slopes_[i] = std::numeric_limits<double>::quiet_NaN();  // linear segment
    }
  }
  if (std::isnan(slopes_[0])) slopes_[0] = 0.0;

  cumulative_.resize(n);
  const double p0 = slopes_[0];
  cumulative_[0] = p0 > -1.0 ? values_[0] * knots_[0] / (p0 + 1.0) : kInf;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    cumulative_[i + 1] = cumulative_[i] + segment_integral(i, knots_[i], knots_[i + 1]);
  }
}

double CustomTail::segment_integral(std::size_t i, double lo, double hi) const {
  const double p = slopes_[i];
  if (std::isnan(p)) {
    const double w = (values_[i + 1] - values_[i]) / (knots_[i + 1] - knots_[i]);
    const double vlo = values_[i] + w * (lo - knots_[i]);
    const double vhi = values_[i] + w * (hi - knots_[i]);
    return 0.5 * (vlo + vhi) * (hi - lo);
  }
  // int_lo^hi v_i (s / s_i)^p ds
  const double si = knots_[i];
  return values_[i] * si * power_difference(p + 1.0, std::log(hi / si), std::log(lo / si));
}

double CustomTail::tail(double s) const {
  if (s >= knots_.back()) return killing_;
  if (s < knots_.front()) return values_.front() * std::pow(s / knots_.front(), slopes_.front());
  const auto it = std::upper_bound(knots_.begin(), knots_.end(), s);
  const std::size_t i = static_cast<std::size_t>(it - knots_.begin()) - 1;
  const double p = slopes_[i];
  if (std::isnan(p)) {
    const double w = (s - knots_[i]) / (knots_[i + 1] - knots_[i]);
    return values_[i] + w * (values_[i + 1] - values_[i]);
  }
  return values_[i] * std::pow(s / knots_[i], p);
}

double CustomTail::primitive(double s) const {
  if (s <= 0.0) return 0.0;
  if (s < knots_.front()) {
    const double p0 = slopes_.front();
    if (!(p0 > -1.0)) return kInf;
    return values_.front() * knots_.front() / (p0 + 1.0) * std::pow(s / knots_.front(), p0 + 1.0);
  }
  if (s >= knots_.back()) return cumulative_.back() + killing_ * (s - knots_.back());
  const auto it = std::upper_bound(knots_.begin(), knots_.end(), s);
  const std::size_t i = static_cast<std::size_t>(it - knots_.begin()) - 1;
  return cumulative_[i] + segment_integral(i, knots_[i], s);
}

// ---------------------------------------------------------------------------
// Construction and validation

BernsteinSpec BernsteinSpec::stable(double alpha, double a, double b) {
  return BernsteinSpec{a, b, Stable{alpha}};
}

BernsteinSpec BernsteinSpec::tempered(double alpha, double theta, double a, double b) {
  return BernsteinSpec{a, b, TemperedStable{alpha, theta}};
}

BernsteinSpec BernsteinSpec::drift(double a, double b) { return BernsteinSpec{a, b, PureDrift{}}; }

BernsteinSpec BernsteinSpec::custom(std::vector<double> knots, std::vector<double> values,
                                    double a, double b) {
  return BernsteinSpec{a, b, CustomTail(std::move(knots), std::move(values), a)};
}

std::string_view to_string(Violation v) noexcept {
  switch (v) {
    case Violation::NegativeKilling: return "NegativeKilling";
    case Violation::NegativeDrift: return "NegativeDrift";
    case Violation::AlphaOutOfRange: return "AlphaOutOfRange";
    case Violation::ThetaNonPositive: return "ThetaNonPositive";
    case Violation::DegenerateExponent: return "DegenerateExponent";
    case Violation::KnotsNotIncreasing: return "KnotsNotIncreasing";
    case Violation::TailNotMonotone: return "TailNotMonotone";
    case Violation::TailBelowKilling: return "TailBelowKilling";
    case Violation::TailNotIntegrableAtZero: return "TailNotIntegrableAtZero";
  }
  return "Unknown";
}

std::vector<Violation> validate(const BernsteinSpec& spec) {
  std::vector<Violation> out;
  if (!(spec.a >= 0.0) || !std::isfinite(spec.a)) out.push_back(Violation::NegativeKilling);
  if (!(spec.b >= 0.0) || !std::isfinite(spec.b)) out.push_back(Violation::NegativeDrift);
  auto check_alpha = [&](double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) out.push_back(Violation::AlphaOutOfRange);
  };
  std::visit(Overloaded{
                 [&](const Stable& s) { check_alpha(s.alpha); },
                 [&](const TemperedStable& s) {
                   check_alpha(s.alpha);
                   if (!(s.theta > 0.0) || !std::isfinite(s.theta)) {
                     out.push_back(Violation::ThetaNonPositive);
                   }
                 },
                 [&](const PureDrift&) {
                   if (spec.a == 0.0 && spec.b == 0.0) out.push_back(Violation::DegenerateExponent);
                 },
                 [&](const CustomTail& t) {
                   const auto knots = t.knots();
                   const auto values = t.values();
                   bool increasing = knots.size() >= 2 && knots.size() == values.size() &&
                                     knots.front() > 0.0;
                   for (std::size_t i = 0; increasing && i + 1 < knots.size(); ++i) {
                     increasing = knots[i + 1] > knots[i];
                   }
                   if (!increasing) {
                     out.push_back(Violation::KnotsNotIncreasing);
                     return;
                   }
                   for (std::size_t i = 0; i + 1 < values.size(); ++i) {
                     if (values[i + 1] > values[i]) {
                       out.push_back(Violation::TailNotMonotone);
                       break;
                     }
                   }
                   for (double v : values) {
                     if (!(v >= spec.a)) {
                       out.push_back(Violation::TailBelowKilling);
                       break;
                     }
                   }
                   if (t.well_formed() && !t.integrable_at_zero()) {
                     out.push_back(Violation::TailNotIntegrableAtZero);
                   }
                 },
             },
             spec.family);
  return out;
}

void require_valid(const BernsteinSpec& spec) {
  const auto violations = validate(spec);
  if (violations.empty()) return;
  std::string detail = "Bernstein spec violates:";
  for (auto v : violations) {
    detail += ' ';
    detail += to_string(v);
  }
  fail(ErrorKind::SpecInvalid, detail);
}

// ---------------------------------------------------------------------------
// Evaluation

std::complex<double> eval_f(const BernsteinSpec& spec, std::complex<double> lambda) {
  if (!(lambda.real() > 0.0)) {
    fail(ErrorKind::NonPositiveRealPart, "eval_f requires Re(lambda) > 0");
  }
  if (const auto* custom = std::get_if<CustomTail>(&spec.family)) {
    return spec.b * lambda + custom_laplace_exponent(*custom, spec.a, lambda);
  }
  return spec.b * lambda + jump_exponent(spec, lambda);
}

double eval_f(const BernsteinSpec& spec, double lambda) {
  return eval_f(spec, std::complex<double>(lambda, 0.0)).real();
}

std::complex<double> jump_exponent(const BernsteinSpec& spec, std::complex<double> lambda) {
  return std::visit(
      Overloaded{
          [&](const Stable& s) -> std::complex<double> {
            return spec.a + std::pow(lambda, s.alpha);
          },
          [&](const TemperedStable& s) -> std::complex<double> {
            return spec.a + std::pow(lambda + s.theta, s.alpha) - std::pow(s.theta, s.alpha);
          },
          [&](const PureDrift&) -> std::complex<double> { return spec.a; },
          [&](const CustomTail& t) -> std::complex<double> {
            if (!(lambda.real() > 0.0)) {
              fail(ErrorKind::UnsupportedSpec,
                   "tabulated tails have no continuation to Re(lambda) <= 0");
            }
            return custom_laplace_exponent(t, spec.a, lambda);
          },
      },
      spec.family);
}

ExtendedReal jump_exponent(const BernsteinSpec& spec, const ExtendedReal& lambda) {
  using boost::multiprecision::pow;
  return std::visit(
      Overloaded{
          [&](const Stable& s) -> ExtendedReal {
            return ExtendedReal(spec.a) + pow(lambda, ExtendedReal(s.alpha));
          },
          [&](const TemperedStable& s) -> ExtendedReal {
            const ExtendedReal theta(s.theta);
            const ExtendedReal alpha(s.alpha);
            return ExtendedReal(spec.a) + pow(lambda + theta, alpha) - pow(theta, alpha);
          },
          [&](const PureDrift&) -> ExtendedReal { return ExtendedReal(spec.a); },
          [&](const CustomTail& t) -> ExtendedReal {
            const double l = static_cast<double>(lambda);
            return ExtendedReal(custom_laplace_exponent(t, spec.a, {l, 0.0}).real());
          },
      },
      spec.family);
}

double eval_tail(const BernsteinSpec& spec, double s) {
  if (!(s > 0.0)) fail(ErrorKind::DomainError, "eval_tail requires s > 0");
  return std::visit(Overloaded{
                        [&](const Stable& f) { return spec.a + stable_tail(f.alpha, s); },
                        [&](const TemperedStable& f) {
                          return spec.a + tempered_tail(f.alpha, f.theta, s);
                        },
                        [&](const PureDrift&) { return spec.a; },
                        [&](const CustomTail& t) { return t.tail(s); },
                    },
                    spec.family);
}

double eval_tail_primitive(const BernsteinSpec& spec, double s) {
  if (!(s >= 0.0)) fail(ErrorKind::DomainError, "eval_tail_primitive requires s >= 0");
  if (s == 0.0) return 0.0;
  return std::visit(
      Overloaded{
          [&](const Stable& f) {
            return spec.a * s + std::pow(s, 1.0 - f.alpha) / std::tgamma(2.0 - f.alpha);
          },
          [&](const TemperedStable& f) {
            // Integration by parts: V(s) = s nu(s) + int_0^s w nu-bar(dw).
            const double alpha = f.alpha;
            const double theta = f.theta;
            const double small_jumps = alpha * std::pow(theta, alpha - 1.0) *
                                       special::lower_incomplete_gamma(1.0 - alpha, theta * s) /
                                       std::tgamma(1.0 - alpha);
            return spec.a * s + s * tempered_tail(alpha, theta, s) + small_jumps;
          },
          [&](const PureDrift&) { return spec.a * s; },
          [&](const CustomTail& t) { return t.primitive(s); },
      },
      spec.family);
}

double tail_at_zero(const BernsteinSpec& spec) {
  return std::visit(Overloaded{
                        [](const Stable&) { return kInf; },
                        [](const TemperedStable&) { return kInf; },
                        [&](const PureDrift&) { return spec.a; },
                        [](const CustomTail& t) {
                          if (t.unbounded_at_zero()) return kInf;
                          return t.leading_exponent() == 0.0 ? t.values().front() : 0.0;
                        },
                    },
                    spec.family);
}

bool has_infinite_activity(const BernsteinSpec& spec) { return std::isinf(tail_at_zero(spec)); }

bool has_closed_form(const BernsteinSpec& spec) {
  return !std::holds_alternative<CustomTail>(spec.family);
}

}  // namespace subflow
