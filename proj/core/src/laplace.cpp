#include "subflow/laplace.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "subflow/error.hpp"
#include "subflow/quadrature.hpp"

namespace subflow {
namespace {

using Complex = std::complex<double>;

void require_density(const BernsteinSpec& spec) {
  require_valid(spec);
  if (!has_infinite_activity(spec)) {
    fail(ErrorKind::UnsupportedSpec,
         "finite-activity subordinators have atoms; no density exists");
  }
}

// Builds a transform from a complex formula and its extended-precision twin.
template <class Fc, class Fr>
Transform make_transform(const BernsteinSpec& spec, Fc&& fc, Fr&& fr) {
  Transform tr;
  if (has_closed_form(spec)) {
    tr.complex = [spec, fc](Complex l) { return fc(l, jump_exponent(spec, l)); };
  }
  tr.real = [spec, fr](const ExtendedReal& l) { return fr(l, jump_exponent(spec, l)); };
  if (!has_closed_form(spec)) tr.real_accuracy = 1e-10;
  return tr;
}

// Inversion output that must be a density: small negative noise becomes 0.
double as_density(double v, const InversionConfig& cfg, const char* what) {
  if (v >= 0.0) return v < 1e-300 ? 0.0 : v;
  if (v >= -cfg.abs_floor) return 0.0;
  std::ostringstream os;
  os << what << " inverted to a negative value " << v;
  fail(ErrorKind::InversionUnstable, os.str());
}

double as_probability(double v, const InversionConfig& cfg) {
  if (v < -cfg.abs_floor || v > 1.0 + cfg.abs_floor) {
    std::ostringstream os;
    os << "probability inverted outside [0, 1]: " << v;
    fail(ErrorKind::InversionUnstable, os.str());
  }
  return std::clamp(v, 0.0, 1.0);
}

// Pr{J(s) <= tau} for the jump part J with exponent j = f - b lambda.
double jump_part_cdf(const BernsteinSpec& spec, double s, double tau, const InversionConfig& cfg) {
  if (tau <= 0.0) return 0.0;
  if (std::holds_alternative<PureDrift>(spec.family)) return std::exp(-spec.a * s);
  using boost::multiprecision::exp;
  auto tr = make_transform(
      spec, [s](Complex l, Complex j) { return std::exp(-s * j) / l; },
      [s](const ExtendedReal& l, const ExtendedReal& j) { return ExtendedReal(exp(-s * j) / l); });
  return as_probability(invert(tr, tau, cfg), cfg);
}

double density_by_inversion(const BernsteinSpec& spec, double t, double s,
                            const InversionConfig& cfg) {
  using boost::multiprecision::exp;
  const double b = spec.b;
  const double tau = t - b * s;
  if (tau <= 0.0) return 0.0;
  auto tr = make_transform(
      spec, [s, b](Complex l, Complex j) { return (b + j / l) * std::exp(-s * j); },
      [s, b](const ExtendedReal& l, const ExtendedReal& j) {
        return ExtendedReal((b + j / l) * exp(-s * j));
      });
  return as_density(invert(tr, tau, cfg), cfg, "l_t(s)");
}

double density_by_convolution(const BernsteinSpec& spec, double t, double s,
                              const InversionConfig& cfg) {
  const double span = t - spec.b * s;
  if (span <= 0.0) return 0.0;
  InversionConfig inner = cfg;
  inner.cross_check = false;
  // z = r^2 tames the integrable singularity of nu at z = 0.
  auto integrand = [&](double r) {
    const double z = r * r;
    if (z <= 0.0) return 0.0;
    return 2.0 * r * subordinator_density(spec, s, t - z, inner) * eval_tail(spec, z);
  };
  quad::Options opts;
  opts.rel_tol = 1e-8;
  opts.abs_tol = 1e-14;
  const auto r = quad::integrate(integrand, 0.0, std::sqrt(span), opts);
  if (!r.converged) fail(ErrorKind::QuadratureFailure, "convolution path did not converge");
  return spec.b * subordinator_density(spec, s, t, inner) + r.value;
}

}  // namespace

double subordinator_density(const BernsteinSpec& spec, double t, double x,
                            const InversionConfig& cfg) {
  require_density(spec);
  if (!(t > 0.0)) fail(ErrorKind::DomainError, "subordinator_density requires t > 0");
  const double tau = x - spec.b * t;
  if (tau <= 0.0) return 0.0;
  using boost::multiprecision::exp;
  auto tr = make_transform(
      spec, [t](Complex, Complex j) { return std::exp(-t * j); },
      [t](const ExtendedReal&, const ExtendedReal& j) { return ExtendedReal(exp(-t * j)); });
  return as_density(invert(tr, tau, cfg), cfg, "mu_t(x)");
}

double subordinator_cdf(const BernsteinSpec& spec, double t, double x,
                        const InversionConfig& cfg) {
  require_valid(spec);
  if (!(t >= 0.0)) fail(ErrorKind::DomainError, "subordinator_cdf requires t >= 0");
  if (t == 0.0) return x >= 0.0 ? 1.0 : 0.0;
  const double tau = x - spec.b * t;
  if (std::holds_alternative<PureDrift>(spec.family)) {
    return tau >= 0.0 ? std::exp(-spec.a * t) : 0.0;
  }
  return jump_part_cdf(spec, t, tau, cfg);
}

double inverse_density(const BernsteinSpec& spec, double t, double s, const DensityOptions& opts) {
  require_density(spec);
  if (!(t > 0.0)) fail(ErrorKind::DomainError, "inverse_density requires t > 0");
  if (!(s >= 0.0)) fail(ErrorKind::DomainError, "inverse_density requires s >= 0");
  if (s == 0.0) {
    if (opts.boundary_rule) return eval_tail(spec, t);
    // l_t(0) from the transform itself: j(lambda) / lambda inverts to nu(t).
    auto tr = make_transform(
        spec, [](Complex l, Complex j) { return j / l; },
        [](const ExtendedReal& l, const ExtendedReal& j) { return ExtendedReal(j / l); });
    return as_density(invert(tr, t, opts.inversion), opts.inversion, "l_t(0)");
  }
  if (opts.path == DensityPath::Convolution) {
    return density_by_convolution(spec, t, s, opts.inversion);
  }
  return density_by_inversion(spec, t, s, opts.inversion);
}

double inverse_tail_cdf(const BernsteinSpec& spec, double t, double s,
                        const InversionConfig& cfg) {
  require_valid(spec);
  if (!(t > 0.0)) fail(ErrorKind::DomainError, "inverse_tail_cdf requires t > 0");
  if (!(s >= 0.0)) fail(ErrorKind::DomainError, "inverse_tail_cdf requires s >= 0");
  if (s == 0.0) return 1.0;
  return jump_part_cdf(spec, s, t - spec.b * s, cfg);
}

double renewal(const BernsteinSpec& spec, double x, RenewalMode mode, const InversionConfig& cfg) {
  require_valid(spec);
  if (!(x > 0.0)) fail(ErrorKind::DomainError, "renewal requires x > 0");
  const double b = spec.b;
  if (mode == RenewalMode::Density && std::holds_alternative<PureDrift>(spec.family) && b == 0.0) {
    fail(ErrorKind::UnsupportedSpec, "renewal measure of a pure killing is an atom at 0");
  }
  Transform tr;
  if (mode == RenewalMode::Function) {
    tr = make_transform(
        spec, [b](Complex l, Complex j) { return 1.0 / (l * (b * l + j)); },
        [b](const ExtendedReal& l, const ExtendedReal& j) {
          return ExtendedReal(1 / (l * (b * l + j)));
        });
  } else {
    tr = make_transform(
        spec, [b](Complex l, Complex j) { return 1.0 / (b * l + j); },
        [b](const ExtendedReal& l, const ExtendedReal& j) { return ExtendedReal(1 / (b * l + j)); });
  }
  return as_density(invert(tr, x, cfg), cfg, "renewal");
}

double DensityField::operator()(double t, double x) const {
  switch (kind) {
    case DensityKind::SubordinatorDensity: return subordinator_density(spec, t, x, inversion);
    case DensityKind::InverseDensity: {
      DensityOptions opts;
      opts.inversion = inversion;
      return inverse_density(spec, t, x, opts);
    }
    case DensityKind::InverseTailCDF: return inverse_tail_cdf(spec, t, x, inversion);
    case DensityKind::RenewalFunction: return renewal(spec, x, RenewalMode::Function, inversion);
    case DensityKind::RenewalDensity: return renewal(spec, x, RenewalMode::Density, inversion);
  }
  return 0.0;
}

}  // namespace subflow
