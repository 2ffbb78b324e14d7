#include <gtest/gtest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <complex>
#include <random>

#include "oracles.hpp"
#include "subflow/bernstein.hpp"
#include "subflow/calculus.hpp"
#include "subflow/error.hpp"
#include "subflow/grid.hpp"

using namespace subflow;

namespace {

GridFunction sample(double (*f)(double), double lo, double hi, std::size_t n) {
  return GridFunction::sample([f](double x) { return f(x); }, lo, hi, n);
}

double max_error(const GridFunction& d, const std::function<double(double)>& exact, double from) {
  double e = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (d.x(i) < from || d.missing(i)) continue;
    e = std::max(e, std::abs(d[i] - exact(d.x(i))));
  }
  return e;
}

// Classical L1 product rule for the Caputo derivative of order alpha, written
// from scratch: D u(t_n) = h^{-alpha}/Gamma(2-alpha) sum_k b_k (u_{n-k} - u_{n-k-1}).
std::vector<double> l1_caputo(double alpha, const GridFunction& u) {
  const double h = u.step();
  const double c = std::pow(h, -alpha) / std::tgamma(2.0 - alpha);
  std::vector<double> out(u.size(), 0.0);
  for (std::size_t n = 1; n < u.size(); ++n) {
    double s = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const double b = std::pow(k + 1.0, 1.0 - alpha) - std::pow(static_cast<double>(k), 1.0 - alpha);
      s += b * (u[n - k] - u[n - k - 1]);
    }
    out[n] = c * s;
  }
  return out;
}

// Weyl derivative of e^{-x^2} from its Fourier symbol: (1/2pi) int f(+-i xi) u^(xi) e^{i xi x} d xi.
// Both directions act on e^{i xi x} as f(+-i xi) e^{i xi x}.
double weyl_gaussian_fourier(double alpha, double x, bool plus) {
  auto integrand = [&](double xi) {
    const std::complex<double> lam(0.0, plus ? xi : -xi);
    const std::complex<double> f = std::pow(lam, alpha);
    const std::complex<double> val =
        f * std::sqrt(oracle::pi) * std::exp(-xi * xi / 4.0) * std::exp(std::complex<double>(0.0, xi * x));
    return val.real();
  };
  const double i = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(integrand, -40.0, 40.0, 15, 1e-13);
  return i / (2.0 * oracle::pi);
}

}  // namespace

TEST(Calculus, CaputoOfIdentity) {
  const auto spec = BernsteinSpec::stable(0.5);
  const auto u = sample([](double t) { return t; }, 0.0, 1.0, 1001);
  const auto d = caputo_derivative(spec, u);
  EXPECT_LE(max_error(d, [](double t) { return std::sqrt(t) / std::tgamma(1.5); }, 0.0), 1e-3);
}

TEST(Calculus, ConstantHasZeroCaputo) {
  const auto u = sample([](double) { return 7.0; }, 0.0, 2.0, 201);
  for (const auto& spec : {BernsteinSpec::stable(0.5), BernsteinSpec::tempered(0.3, 2.0, 0.5, 1.0)}) {
    const auto d = caputo_derivative(spec, u);
    for (std::size_t i = 0; i < d.size(); ++i) EXPECT_EQ(d[i], 0.0);
  }
}

TEST(Calculus, PureDriftIsOrdinaryDerivative) {
  const auto spec = BernsteinSpec::drift(0.0, 1.0);
  const auto u = sample([](double t) { return t * t; }, 0.0, 1.0, 101);
  EXPECT_LE(max_error(caputo_derivative(spec, u), [](double t) { return 2 * t; }, 0.0), 1e-12);
  const auto e = sample([](double t) { return std::exp(t); }, 0.0, 1.0, 1001);
  EXPECT_LE(max_error(rl_derivative(spec, e), [](double t) { return std::exp(t); }, 0.0), 1e-5);
}

TEST(Calculus, RiemannLiouvilleExamples) {
  const auto spec = BernsteinSpec::stable(0.5);
  const auto one = sample([](double) { return 1.0; }, 0.0, 1.0, 1001);
  const auto d = rl_derivative(spec, one);
  EXPECT_TRUE(d.missing(0));
  for (std::size_t i = 50; i < d.size(); ++i) {
    const double ref = 1.0 / std::sqrt(oracle::pi * d.x(i));
    EXPECT_NEAR(d[i] / ref, 1.0, 1e-12);
  }
  const auto id = sample([](double t) { return t; }, 0.0, 1.0, 1001);
  EXPECT_LE(max_error(rl_derivative(spec, id), [](double t) { return std::sqrt(t) / std::tgamma(1.5); }, 0.0),
            1e-3);
}

TEST(Calculus, ShiftedOrigin) {
  const auto spec = BernsteinSpec::stable(0.3);
  const auto u = sample([](double t) { return (t - 0.5) * (t - 0.5); }, 0.5, 2.0, 3001);
  const auto exact = [](double t) { return 2.0 * std::pow(t - 0.5, 1.7) / std::tgamma(2.7); };
  EXPECT_LE(max_error(caputo_derivative(spec, u), exact, 0.5), 1e-3);
}

TEST(Calculus, WeylMatchesFourierSymbol) {
  const auto spec = BernsteinSpec::stable(0.5);
  const auto u = sample([](double x) { return std::exp(-x * x); }, -8.0, 8.0, 1601);
  for (auto dir : {WeylDirection::Plus, WeylDirection::Minus}) {
    const auto d = weyl_derivative(spec, u, dir);
    double err = 0.0;
    double scale = 0.0;
    for (std::size_t i = 0; i < d.size(); i += 10) {
      if (std::abs(d.x(i)) > 4.0) continue;
      const double ref = weyl_gaussian_fourier(0.5, d.x(i), dir == WeylDirection::Plus);
      err = std::max(err, std::abs(d[i] - ref));
      scale = std::max(scale, std::abs(ref));
    }
    EXPECT_LE(err / scale, 1e-3);
  }
}

TEST(Calculus, WeylTrivialCases) {
  const auto c = sample([](double) { return 3.0; }, -5.0, 5.0, 201);
  const auto d = weyl_derivative(BernsteinSpec::stable(0.5), c, WeylDirection::Plus);
  for (std::size_t i = 0; i < d.size(); ++i) EXPECT_EQ(d[i], 0.0);

  const auto g = sample([](double x) { return std::exp(-x * x); }, -8.0, 8.0, 801);
  const auto m = weyl_derivative(BernsteinSpec::drift(1.0, 0.0), g, WeylDirection::Minus);
  for (std::size_t i = 0; i < m.size(); ++i) EXPECT_NEAR(m[i], g[i], 1e-12);
}

TEST(Calculus, WeylRejectsNarrowWindow) {
  const auto g = sample([](double x) { return std::exp(-x * x); }, -1.0, 1.0, 201);
  EXPECT_THROW(weyl_derivative(BernsteinSpec::stable(0.5), g, WeylDirection::Plus), Error);
}

TEST(Calculus, LaplaceSymbol) {
  const std::vector<double> lambdas{2.0, 4.0, 8.0};
  const auto u = sample([](double t) { return std::exp(-t); }, 0.0, 15.0, 15001);
  EXPECT_LE(laplace_symbol_check(BernsteinSpec::stable(0.5), u, lambdas), 1e-3);
  EXPECT_LE(laplace_symbol_check(BernsteinSpec::tempered(0.5, 1.0), u, lambdas), 1e-3);
  const auto t = sample([](double x) { return x; }, 0.0, 40.0, 4001);
  EXPECT_LE(laplace_symbol_check(BernsteinSpec::drift(0.0, 1.0), t, std::vector<double>{1.0}), 1e-6);
}

TEST(Calculus, RejectsCoarseGrid) {
  EXPECT_THROW(caputo_derivative(BernsteinSpec::stable(0.5), GridFunction(0.0, 0.1, {1.0, 2.0})), Error);
}

TEST(CalculusProperty, Linearity) {
  std::mt19937_64 gen(11);
  std::normal_distribution<double> z;
  for (const auto& spec : {BernsteinSpec::stable(0.4), BernsteinSpec::tempered(0.6, 1.5, 0.2, 0.3)}) {
    std::vector<double> a(301), b(301), c(301);
    for (std::size_t i = 0; i < a.size(); ++i) {
      a[i] = z(gen);
      b[i] = z(gen);
    }
    const double p = 1.7, q = -0.4;
    for (std::size_t i = 0; i < a.size(); ++i) c[i] = p * a[i] + q * b[i];
    const GridFunction ua(0.0, 0.01, a), ub(0.0, 0.01, b), uc(0.0, 0.01, c);
    for (int op = 0; op < 3; ++op) {
      auto apply = [&](const GridFunction& u) {
        if (op == 0) return caputo_derivative(spec, u);
        if (op == 1) return rl_derivative(spec, u);
        return weyl_derivative(spec, u, WeylDirection::Minus, CalculusOptions{1e-12, 1e6});
      };
      const auto da = apply(ua), db = apply(ub), dc = apply(uc);
      for (std::size_t i = 0; i < dc.size(); ++i) {
        if (dc.missing(i)) continue;
        const double lin = p * da[i] + q * db[i];
        EXPECT_NEAR(dc[i], lin, 1e-10 * (1.0 + std::abs(lin))) << "op " << op << " i " << i;
      }
    }
  }
}

TEST(CalculusProperty, RiemannLiouvilleMinusCaputo) {
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  for (const auto& spec : {BernsteinSpec::stable(0.7), BernsteinSpec::tempered(0.5, 1.0, 0.3, 0.0),
                           BernsteinSpec::drift(0.4, 1.0)}) {
    std::vector<double> v(200);
    for (auto& x : v) x = unif(gen);
    const GridFunction u(0.25, 0.02, v);
    const auto rl = rl_derivative(spec, u);
    const auto cap = caputo_derivative(spec, u);
    for (std::size_t i = 1; i < u.size(); ++i) {
      EXPECT_EQ(rl[i], cap[i] + eval_tail(spec, u.x(i) - u.origin()) * u[0]) << i;
    }
  }
}

TEST(CalculusProperty, ClassicalLimitAgainstL1Scheme) {
  for (double alpha : {0.2, 0.5, 0.8}) {
    const auto spec = BernsteinSpec::stable(alpha);
    const auto u = sample([](double t) { return std::sin(3 * t) + t * t; }, 0.0, 2.0, 2001);
    const auto d = caputo_derivative(spec, u);
    const auto ref = l1_caputo(alpha, u);
    double err = 0.0;
    for (std::size_t i = 0; i < d.size(); ++i) err = std::max(err, std::abs(d[i] - ref[i]));
    EXPECT_LE(err, 1e-3) << "alpha " << alpha;
  }
}

TEST(CalculusProperty, RefinementOrder) {
  const auto spec = BernsteinSpec::stable(0.5);
  const auto exact = [](double t) { return 2.0 * std::pow(t, 1.5) / std::tgamma(2.5); };
  double prev = 0.0;
  for (std::size_t n : {101, 201, 401, 801}) {
    const auto u = sample([](double t) { return t * t; }, 0.0, 1.0, n);
    const double e = max_error(caputo_derivative(spec, u), exact, 0.0);
    if (prev > 0.0) EXPECT_GE(prev / e, 1.8) << "n " << n;
    prev = e;
  }
}
