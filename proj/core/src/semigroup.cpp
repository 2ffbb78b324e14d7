#include "subflow/semigroup.hpp"

#include <unsupported/Eigen/FFT>
#include <unsupported/Eigen/MatrixFunctions>

#include <boost/math/constants/constants.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <sstream>

#include "subflow/calculus.hpp"
#include "subflow/error.hpp"
#include "subflow/laplace.hpp"
#include "subflow/parallel.hpp"
#include "subflow/quadrature.hpp"

namespace subflow {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void require_state(const SemigroupSpec& sg, const StateVector& u) {
  if (static_cast<std::size_t>(u.size()) != state_size(sg)) {
    std::ostringstream os;
    os << "state has " << u.size() << " entries, semigroup expects " << state_size(sg);
    fail(ErrorKind::DomainError, os.str());
  }
}

std::vector<double> wave_numbers(const Heat1D& h) {
  const double two_pi = 2.0 * boost::math::constants::pi<double>();
  const double length = h.hi - h.lo;
  std::vector<double> k(h.n);
  for (std::size_t m = 0; m < h.n; ++m) {
    const double signed_m = m <= h.n / 2 ? static_cast<double>(m)
                                         : static_cast<double>(m) - static_cast<double>(h.n);
    k[m] = two_pi * signed_m / length;
  }
  return k;
}

// Multiplies the spectrum of u by mult(k).
template <class Mult>
StateVector spectral(const Heat1D& h, const StateVector& u, Mult&& mult) {
  Eigen::FFT<double> fft;
  std::vector<double> in(u.data(), u.data() + u.size());
  std::vector<std::complex<double>> spec;
  fft.fwd(spec, in);
  const auto k = wave_numbers(h);
  for (std::size_t m = 0; m < spec.size(); ++m) spec[m] *= mult(k[m]);
  std::vector<double> out;
  fft.inv(out, spec);
  return Eigen::Map<const StateVector>(out.data(), static_cast<Eigen::Index>(out.size()));
}

// Value scale of sigma(t): 1 / lambda with t (f(lambda) - b lambda) = 1.
double subordinator_scale(const BernsteinSpec& spec, double t) {
  auto j = [&](double l) { return jump_exponent(spec, std::complex<double>(l, 0.0)).real(); };
  double lo = -30.0;
  double hi = 30.0;
  if (t * j(std::exp(hi)) < 1.0) return std::max(t, 1e-3);
  if (t * j(std::exp(lo)) > 1.0) return std::exp(-lo);
  for (int i = 0; i < 60; ++i) {
    const double mid = 0.5 * (lo + hi);
    (t * j(std::exp(mid)) < 1.0 ? lo : hi) = mid;
  }
  return std::exp(-0.5 * (lo + hi));
}

bool orbit_settled(const SemigroupSpec& sg, double s, const StateVector& u, double unorm) {
  return norm(sg, apply(sg, 2.0 * s, u) - apply(sg, s, u)) <= 1e-10 * unorm;
}

quad::Options panel_options(const SemigroupOptions& opts, double unorm) {
  quad::Options q;
  q.rel_tol = opts.rel_tol;
  q.abs_tol = 1e-3 * opts.rel_tol * unorm;
  return q;
}

}  // namespace

void validate(const SemigroupSpec& sg) {
  std::visit(Overloaded{
                 [](const ScalarRelaxation& s) {
                   if (!(s.mu > 0.0)) fail(ErrorKind::SpecInvalid, "relaxation rate must be > 0");
                 },
                 [](const LeftTranslation& s) {
                   if (!(s.hi > s.lo) || s.n < 3) {
                     fail(ErrorKind::SpecInvalid, "translation grid needs hi > lo and n >= 3");
                   }
                 },
                 [](const Heat1D& s) {
                   if (!(s.kappa > 0.0)) fail(ErrorKind::SpecInvalid, "diffusivity must be > 0");
                   if (!(s.hi > s.lo) || s.n < 4) {
                     fail(ErrorKind::SpecInvalid, "heat grid needs hi > lo and n >= 4");
                   }
                 },
                 [](const MarkovMatrix& s) {
                   const auto& q = s.q;
                   if (q.rows() == 0 || q.rows() != q.cols()) {
                     fail(ErrorKind::SpecInvalid, "generator matrix must be square and non-empty");
                   }
                   const double scale = std::max(1.0, q.cwiseAbs().maxCoeff());
                   for (Eigen::Index i = 0; i < q.rows(); ++i) {
                     if (std::abs(q.row(i).sum()) > 1e-12 * scale) {
                       fail(ErrorKind::SpecInvalid, "generator rows must sum to zero");
                     }
                     for (Eigen::Index j = 0; j < q.cols(); ++j) {
                       if (i != j && q(i, j) < 0.0) {
                         fail(ErrorKind::SpecInvalid, "generator off-diagonals must be >= 0");
                       }
                     }
                   }
                 },
             },
             sg);
}

std::size_t state_size(const SemigroupSpec& sg) {
  return std::visit(Overloaded{
                        [](const ScalarRelaxation&) -> std::size_t { return 1; },
                        [](const LeftTranslation& s) { return s.n; },
                        [](const Heat1D& s) { return s.n; },
                        [](const MarkovMatrix& s) { return static_cast<std::size_t>(s.q.rows()); },
                    },
                    sg);
}

double norm(const SemigroupSpec& sg, const StateVector& u) {
  if (const auto* h = std::get_if<Heat1D>(&sg)) {
    return std::sqrt((h->hi - h->lo) / static_cast<double>(h->n)) * u.norm();
  }
  return u.size() == 0 ? 0.0 : u.lpNorm<Eigen::Infinity>();
}

StateVector apply(const SemigroupSpec& sg, double t, const StateVector& u) {
  if (t < 0.0) fail(ErrorKind::NegativeTime, "semigroup time must be >= 0");
  require_state(sg, u);
  if (t == 0.0) return u;
  return std::visit(
      Overloaded{
          [&](const ScalarRelaxation& s) -> StateVector { return std::exp(-s.mu * t) * u; },
          [&](const LeftTranslation& s) -> StateVector {
            const double h = s.step();
            const std::size_t n = s.n;
            StateVector out(static_cast<Eigen::Index>(n));
            for (std::size_t i = 0; i < n; ++i) {
              const double pos = static_cast<double>(i) + t / h;
              if (pos >= static_cast<double>(n - 1)) {
                out[i] = u[n - 1];
                continue;
              }
              const auto j = static_cast<std::size_t>(pos);
              const double w = pos - static_cast<double>(j);
              out[i] = u[j] + w * (u[j + 1] - u[j]);
            }
            return out;
          },
          [&](const Heat1D& s) -> StateVector {
            return spectral(s, u, [&](double k) { return std::exp(-s.kappa * k * k * t); });
          },
          [&](const MarkovMatrix& s) -> StateVector {
            const Eigen::MatrixXd e = (t * s.q).exp();
            return e * u;
          },
      },
      sg);
}

StateVector generator(const SemigroupSpec& sg, const StateVector& u) {
  require_state(sg, u);
  return std::visit(
      Overloaded{
          [&](const ScalarRelaxation& s) -> StateVector { return -s.mu * u; },
          [&](const LeftTranslation& s) -> StateVector {
            const double h = s.step();
            StateVector out = StateVector::Zero(u.size());
            for (Eigen::Index i = 0; i + 1 < u.size(); ++i) out[i] = (u[i + 1] - u[i]) / h;
            return out;
          },
          [&](const Heat1D& s) -> StateVector {
            return spectral(s, u, [&](double k) { return -s.kappa * k * k; });
          },
          [&](const MarkovMatrix& s) -> StateVector { return s.q * u; },
      },
      sg);
}

StateVector orbit_derivative(const SemigroupSpec& sg, double s, const StateVector& u) {
  if (const auto* tr = std::get_if<LeftTranslation>(&sg)) {
    require_state(sg, u);
    const double h = tr->step();
    const std::size_t n = tr->n;
    StateVector out = StateVector::Zero(u.size());
    for (std::size_t i = 0; i < n; ++i) {
      const double pos = static_cast<double>(i) + s / h;
      if (pos >= static_cast<double>(n - 1)) continue;
      const auto j = static_cast<std::size_t>(pos);
      out[i] = (u[j + 1] - u[j]) / h;
    }
    return out;
  }
  return apply(sg, s, generator(sg, u));
}

StateVector subordinate_apply(const SemigroupSpec& sg, const BernsteinSpec& spec, double t,
                              const StateVector& u, const SemigroupOptions& opts) {
  validate(sg);
  require_valid(spec);
  if (t < 0.0) fail(ErrorKind::NegativeTime, "time must be >= 0");
  require_state(sg, u);
  if (t == 0.0) return u;
  if (std::holds_alternative<PureDrift>(spec.family)) {
    return std::exp(-spec.a * t) * apply(sg, spec.b * t, u);
  }
  if (!has_infinite_activity(spec)) {
    fail(ErrorKind::UnsupportedSpec, "subordination needs a density (infinite activity)");
  }
  InversionConfig inv;
  inv.cross_check = false;
  const double unorm = norm(sg, u);
  const double start = spec.b * t;
  const double scale = subordinator_scale(spec, t);
  const double mass = std::exp(-spec.a * t);
  auto integrand = [&](double s) -> StateVector {
    return subordinator_density(spec, t, s, inv) * apply(sg, s, u);
  };
  const auto qopts = panel_options(opts, unorm);

  StateVector acc = StateVector::Zero(u.size());
  double edge = start;
  double width = 1e-6 * scale;
  for (int panel = 0; panel < 400; ++panel) {
    const double next = start + width;
    acc += quad::integrate(integrand, edge, next, qopts).value;
    edge = next;
    width *= 2.0;
    if (width < scale) continue;
    const double left = mass - subordinator_cdf(spec, t, edge, inv);
    if (left < opts.tail_mass || orbit_settled(sg, edge, u, unorm)) {
      // The orbit is (nearly) constant beyond edge; attach the remaining mass there.
      acc += std::max(left, 0.0) * apply(sg, edge, u);
      return acc;
    }
  }
  fail(ErrorKind::QuadratureFailure, "subordinator law did not become negligible");
}

StateVector time_changed_apply(const SemigroupSpec& sg, const BernsteinSpec& spec, double t,
                               const StateVector& u, const SemigroupOptions& opts) {
  validate(sg);
  require_valid(spec);
  if (t < 0.0) fail(ErrorKind::NegativeTime, "time must be >= 0");
  require_state(sg, u);
  if (t == 0.0) return u;
  const double unorm = norm(sg, u);
  const auto qopts = panel_options(opts, unorm);
  const double a = spec.a;
  const double b = spec.b;

  if (std::holds_alternative<PureDrift>(spec.family)) {
    // L(t) = min(t / b, zeta) with zeta ~ Exp(a).
    if (a == 0.0) return apply(sg, t / b, u);
    auto killed = [&](double s) -> StateVector { return a * std::exp(-a * s) * apply(sg, s, u); };
    const double end = b > 0.0 ? t / b : std::log(1.0 / opts.tail_mass) / a + 40.0 / a;
    StateVector acc = quad::integrate(killed, 0.0, end, qopts).value;
    const double left = std::exp(-a * end);
    if (b > 0.0) acc += left * apply(sg, end, u);
    return acc;
  }
  if (!has_infinite_activity(spec)) {
    fail(ErrorKind::UnsupportedSpec, "time change needs a density (infinite activity)");
  }

  DensityOptions dens;
  dens.inversion.cross_check = false;
  auto integrand = [&](double s) -> StateVector {
    return inverse_density(spec, t, s, dens) * apply(sg, s, u);
  };
  // Typical size of L(t) is 1 / f(1 / t).
  const double scale = 1.0 / eval_f(spec, 1.0 / t);
  const double support = b > 0.0 ? t / b : std::numeric_limits<double>::infinity();

  StateVector acc = StateVector::Zero(u.size());
  double edge = 0.0;
  double next = std::min(0.25 * scale, support);
  for (int panel = 0; panel < 200; ++panel) {
    acc += quad::integrate(integrand, edge, next, qopts).value;
    edge = next;
    if (edge >= support) return acc;
    const double left = inverse_tail_cdf(spec, t, edge, dens.inversion);
    if (left < opts.tail_mass || (edge >= scale && orbit_settled(sg, edge, u, unorm))) {
      acc += left * apply(sg, edge, u);
      return acc;
    }
    next = std::min(2.0 * edge, support);
  }
  fail(ErrorKind::QuadratureFailure, "hitting-time law did not become negligible");
}

StateVector phillips_generator(const SemigroupSpec& sg, const BernsteinSpec& spec,
                               const StateVector& u) {
  validate(sg);
  require_valid(spec);
  require_state(sg, u);
  const StateVector au = generator(sg, u);
  StateVector out = -spec.a * u + spec.b * au;
  const double unorm = norm(sg, u);
  if (unorm == 0.0 || std::holds_alternative<PureDrift>(spec.family)) return out;

  // Below s*, T_s u - u is replaced by s A u.
  double cut = 1e-2;
  while (norm(sg, apply(sg, cut, u) - u - cut * au) > 1e-10 * unorm) {
    cut *= 0.5;
    if (cut < 1e-12) {
      fail(ErrorKind::QuadratureFailure, "no switch point with |T_s u - u - s A u| <= 1e-10 |u|");
    }
  }
  const double a = spec.a;
  const double nu_cut = eval_tail(spec, cut);
  out += (eval_tail_primitive(spec, cut) - cut * nu_cut) * au;
  out += (nu_cut - a) * (apply(sg, cut, u) - u);

  auto integrand = [&](double s) -> StateVector {
    return (eval_tail(spec, s) - a) * orbit_derivative(sg, s, u);
  };
  quad::Options qopts;
  qopts.rel_tol = 1e-12;
  qopts.abs_tol = 1e-14 * std::max(unorm, norm(sg, au));

  if (const auto* tr = std::get_if<LeftTranslation>(&sg)) {
    // The orbit derivative is piecewise constant between multiples of h and
    // vanishes once the shift leaves the window.
    const double h = tr->step();
    std::vector<double> breaks{cut};
    for (std::size_t k = 1; k < tr->n; ++k) {
      const double s = static_cast<double>(k) * h;
      if (s > cut) breaks.push_back(s);
    }
    std::vector<StateVector> pieces(breaks.size() - 1);
    parallel_for(
        pieces.size(),
        [&](std::size_t i) { pieces[i] = quad::integrate(integrand, breaks[i], breaks[i + 1], qopts).value; },
        16);
    for (const auto& p : pieces) out += p;
    return out;
  }

  StateVector acc = StateVector::Zero(u.size());
  double lo = cut;
  for (int panel = 0; panel < 400; ++panel) {
    const double hi = 2.0 * lo;
    const StateVector piece = quad::integrate(integrand, lo, hi, qopts).value;
    acc += piece;
    lo = hi;
    const double scale = std::max(norm(sg, acc), 1e-300);
    const double remaining = norm(sg, integrand(hi)) * hi;
    if (hi > 1.0 && norm(sg, piece) <= 1e-14 * scale && remaining <= 1e-14 * scale) {
      return out + acc;
    }
  }
  fail(ErrorKind::QuadratureFailure, "Phillips integral did not converge");
}

CauchySolution solve_cauchy(const SemigroupSpec& sg, const BernsteinSpec& spec,
                            const StateVector& u0, double horizon, std::size_t n,
                            const CauchyOptions& opts) {
  validate(sg);
  require_valid(spec);
  require_state(sg, u0);
  if (!(horizon > 0.0) || n < 3) fail(ErrorKind::DomainError, "time grid needs T > 0 and n >= 3");
  const StateVector au0 = generator(sg, u0);
  if (!au0.allFinite()) {
    fail(ErrorKind::DomainProxyViolation, "A u0 is not finite on the grid");
  }
  double anorm = norm(sg, au0);
  if (anorm == 0.0) anorm = 1.0;

  CauchySolution sol;
  const double h = horizon / static_cast<double>(n - 1);
  sol.times.resize(n);
  sol.trajectory.resize(n);
  for (std::size_t k = 0; k < n; ++k) sol.times[k] = k + 1 == n ? horizon : static_cast<double>(k) * h;
  parallel_for(n, [&](std::size_t k) {
    sol.trajectory[k] = time_changed_apply(sg, spec, sol.times[k], u0, opts.semigroup);
  });

  const std::size_t dim = state_size(sg);
  auto residuals_at = [&](std::size_t stride) {
    const std::size_t m = (n - 1) / stride + 1;
    std::vector<double> res(m, kNaN);
    if (m < 3) return res;
    Eigen::MatrixXd deriv(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(m));
    for (std::size_t c = 0; c < dim; ++c) {
      std::vector<double> values(m);
      for (std::size_t k = 0; k < m; ++k) values[k] = sol.trajectory[k * stride][c];
      const GridFunction d =
          caputo_derivative(spec, GridFunction(0.0, h * static_cast<double>(stride), values));
      for (std::size_t k = 0; k < m; ++k) deriv(c, k) = d[k];
    }
    for (std::size_t k = 0; k < m; ++k) {
      const double t = sol.times[k * stride];
      if (t < opts.residual_start * horizon) continue;
      const StateVector gap = deriv.col(k) - generator(sg, sol.trajectory[k * stride]);
      res[k] = norm(sg, gap) / anorm;
    }
    return res;
  };
  auto max_of = [](const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) {
      if (!std::isnan(x)) m = std::max(m, x);
    }
    return m;
  };

  sol.residuals = residuals_at(1);
  sol.max_residual = max_of(sol.residuals);
  for (std::size_t stride : {4u, 2u, 1u}) {
    if ((n - 1) / stride + 1 < 3) continue;
    sol.refinement.push_back({h * static_cast<double>(stride),
                              stride == 1 ? sol.max_residual : max_of(residuals_at(stride))});
  }
  return sol;
}

}  // namespace subflow
