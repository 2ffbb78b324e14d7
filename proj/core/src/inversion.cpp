#include "subflow/inversion.hpp"

#include <boost/math/constants/constants.hpp>

#include <array>
#include <cmath>
#include <sstream>

#include "subflow/error.hpp"

namespace subflow {
namespace {

constexpr int kMinTerms = 8;
constexpr int kMaxTerms = 48;

using Weights = std::array<ExtendedReal, kMaxTerms + 1>;

Weights compute_weights(int n) {
  using boost::multiprecision::pow;
  auto factorial = [](int k) {
    ExtendedReal r = 1;
    for (int i = 2; i <= k; ++i) r *= i;
    return r;
  };
  const int half = n / 2;
  Weights v{};
  for (int k = 1; k <= n; ++k) {
    ExtendedReal sum = 0;
    for (int j = (k + 1) / 2; j <= std::min(k, half); ++j) {
      sum += pow(ExtendedReal(j), half) * factorial(2 * j) /
             (factorial(half - j) * factorial(j) * factorial(j - 1) * factorial(k - j) *
              factorial(2 * j - k));
    }
    v[k] = ((k + half) % 2 == 0) ? sum : ExtendedReal(-sum);
  }
  return v;
}

const Weights& stehfest_weights(int n) {
  static const auto table = [] {
    std::array<Weights, kMaxTerms / 2 + 1> t{};
    for (int m = kMinTerms; m <= kMaxTerms; m += 2) t[m / 2] = compute_weights(m);
    return t;
  }();
  return table[n / 2];
}

}  // namespace

void InversionConfig::validate() const {
  if (n_terms % 2 != 0 || n_terms < kMinTerms || n_terms > kMaxTerms) {
    fail(ErrorKind::ConfigError, "n_terms must be even and within [8, 48]");
  }
  if (n_nodes < 16) fail(ErrorKind::ConfigError, "n_nodes must be >= 16");
  if (!(tol > 0.0) || !(abs_floor >= 0.0)) {
    fail(ErrorKind::ConfigError, "inversion tolerances must be positive");
  }
}

double talbot(const std::function<std::complex<double>(std::complex<double>)>& F, double t,
              int nodes) {
  const double pi = boost::math::constants::pi<double>();
  const double m = nodes;
  const double r = 2.0 * m / (5.0 * t);
  double sum = 0.5 * std::exp(r * t) * F({r, 0.0}).real();
  for (int k = 1; k < nodes; ++k) {
    const double theta = k * pi / m;
    const double cot = std::cos(theta) / std::sin(theta);
    const std::complex<double> delta(r * theta * cot, r * theta);
    const std::complex<double> gamma(1.0, theta * (1.0 + cot * cot) - cot);
    sum += (std::exp(t * delta) * gamma * F(delta)).real();
  }
  return r / m * sum;
}

namespace {

struct StehfestSums {
  double value = 0.0;
  double spread = 0.0;  // max(|G_n - G_{n-2}|, |G_{n-2} - G_{n-4}|)
};

// The n-2 and n-4 term rules sample a subset of the same abscissae k ln2 / t,
// so the companion sums are free. GS iterates oscillate near zero, hence two
// differences rather than one.
StehfestSums stehfest_sums(const std::function<ExtendedReal(const ExtendedReal&)>& F, double t,
                           int terms) {
  const ExtendedReal step = boost::math::constants::ln_two<ExtendedReal>() / ExtendedReal(t);
  std::vector<ExtendedReal> fk(static_cast<std::size_t>(terms) + 1);
  for (int k = 1; k <= terms; ++k) fk[k] = F(step * k);
  auto sum_with = [&](int n) {
    const auto& v = stehfest_weights(n);
    ExtendedReal sum = 0;
    for (int k = 1; k <= n; ++k) sum += v[k] * fk[k];
    return static_cast<double>(sum * step);
  };
  StehfestSums out;
  out.value = sum_with(terms);
  double prev = out.value;
  for (int n = terms - 2; n >= std::max(kMinTerms, terms - 4); n -= 2) {
    const double g = sum_with(n);
    out.spread = std::max(out.spread, std::abs(prev - g));
    prev = g;
  }
  return out;
}

}  // namespace

double gaver_stehfest(const std::function<ExtendedReal(const ExtendedReal&)>& F, double t,
                      int terms) {
  return stehfest_sums(F, t, terms).value;
}

double stehfest_amplification(int terms) {
  const auto& v = stehfest_weights(terms);
  ExtendedReal s = 0;
  for (int k = 1; k <= terms; ++k) s += abs(v[k]);
  return static_cast<double>(s);
}

double invert(const Transform& F, double t, const InversionConfig& cfg) {
  cfg.validate();
  if (!(t > 0.0)) fail(ErrorKind::DomainError, "inversion point must be positive");

  int terms = cfg.n_terms;
  if (F.real_accuracy > 0.0) {
    // Keep the amplified evaluation noise well below the requested tolerance.
    while (terms > kMinTerms && stehfest_amplification(terms) * F.real_accuracy > 0.1 * cfg.tol) {
      terms -= 2;
    }
  }
  const bool have_talbot = static_cast<bool>(F.complex);
  const bool use_talbot = have_talbot && cfg.method == InversionMethod::Talbot;
  const bool check = cfg.cross_check && have_talbot && static_cast<bool>(F.real);

  double primary = 0.0;
  double other = 0.0;
  double spread = 0.0;
  if (use_talbot) {
    primary = talbot(F.complex, t, cfg.n_nodes);
    if (check) {
      const auto gs = stehfest_sums(F.real, t, terms);
      other = gs.value;
      spread = gs.spread;
    }
  } else {
    if (!F.real) fail(ErrorKind::UnsupportedSpec, "transform has no real-axis evaluator");
    const auto gs = stehfest_sums(F.real, t, terms);
    primary = gs.value;
    spread = gs.spread;
    if (check) other = talbot(F.complex, t, cfg.n_nodes);
  }
  if (!std::isfinite(primary)) {
    fail(ErrorKind::InversionUnstable, "inversion produced a non-finite value");
  }
  if (check) {
    const double diff = std::abs(primary - other);
    // Gaver-Stehfest converges slowly on sharply peaked functions; only a gap
    // beyond its own convergence estimate counts as disagreement.
    const double bound =
        cfg.tol * std::max(std::abs(primary), std::abs(other)) + cfg.abs_floor + spread;
    if (!(diff <= bound)) {
      std::ostringstream os;
      os.precision(10);
      os << "Talbot and Gaver-Stehfest disagree at t = " << t << ": " << primary << " vs "
         << other;
      fail(ErrorKind::InversionUnstable, os.str());
    }
  }
  return primary;
}

}  // namespace subflow
