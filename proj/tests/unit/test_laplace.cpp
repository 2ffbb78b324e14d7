#include <gtest/gtest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>

#include "oracles.hpp"
#include "subflow/error.hpp"
#include "subflow/laplace.hpp"

using namespace subflow;

namespace {

const BernsteinSpec kStable = BernsteinSpec::stable(0.5);
const BernsteinSpec kTempered = BernsteinSpec::tempered(0.5, 1.0);

double integrate(const std::function<double(double)>& f, double lo, double hi) {
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, lo, hi, 12, 1e-8);
}

}  // namespace

TEST(Laplace, LevyDensity) {
  EXPECT_NEAR(subordinator_density(kStable, 1.0, 1.0), 0.21969564473386120, 1e-10);
  for (double x = 0.05; x <= 10.0; x *= 1.3) {
    EXPECT_NEAR(subordinator_density(kStable, 1.0, x) / oracle::levy_density(1.0, x), 1.0, 1e-4) << x;
  }
}

TEST(Laplace, DensityNormalization) {
  EXPECT_NEAR(oracle::log_mass([](double x) { return subordinator_density(kStable, 1.0, x); }, -8.0, 40.0),
              1.0, 1e-4);
  EXPECT_NEAR(oracle::log_mass([](double x) { return subordinator_density(kTempered, 1.0, x); }, -8.0, 4.5),
              1.0, 1e-4);
  // killed: total mass e^{-a t}
  const auto killed = BernsteinSpec::tempered(0.5, 1.0, 0.5);
  EXPECT_NEAR(oracle::log_mass([&](double x) { return subordinator_density(killed, 1.0, x); }, -8.0, 4.5),
              std::exp(-0.5), 1e-4);
}

TEST(Laplace, InverseStableDensity) {
  EXPECT_NEAR(inverse_density(kStable, 1.0, 1.0), 0.43939128946772240, 1e-10);
  for (double s = 0.0; s <= 4.0; s += 0.1) {
    EXPECT_NEAR(inverse_density(kStable, 1.0, s) / oracle::inverse_stable_half(1.0, s), 1.0, 1e-4) << s;
  }
  EXPECT_NEAR(integrate([](double s) { return inverse_density(kStable, 1.0, s); }, 0.0, 40.0), 1.0, 1e-4);
}

TEST(Laplace, BoundaryValueIsTail) {
  for (const auto& spec : {kStable, kTempered, BernsteinSpec::stable(0.3, 0.2, 0.0)}) {
    for (double t : {0.5, 1.0, 2.0}) {
      EXPECT_DOUBLE_EQ(inverse_density(spec, t, 0.0), eval_tail(spec, t));
      DensityOptions raw;
      raw.boundary_rule = false;
      EXPECT_NEAR(inverse_density(spec, t, 0.0, raw) / eval_tail(spec, t), 1.0, 1e-3);
    }
  }
}

TEST(Laplace, TailCdf) {
  EXPECT_NEAR(inverse_tail_cdf(kStable, 1.0, 1.0), 0.47950012218695346, 1e-9);
  EXPECT_DOUBLE_EQ(inverse_tail_cdf(kStable, 1.0, 0.0), 1.0);
  const auto drift = BernsteinSpec::drift(0.0, 1.0);
  EXPECT_EQ(inverse_tail_cdf(drift, 2.0, 1.5), 1.0);
  EXPECT_EQ(inverse_tail_cdf(drift, 2.0, 2.5), 0.0);
}

TEST(Laplace, Renewal) {
  EXPECT_NEAR(renewal(kStable, 1.0, RenewalMode::Function), 1.1283791670955126, 1e-9);
  for (double alpha : {0.3, 0.5, 0.8}) {
    const auto s = BernsteinSpec::stable(alpha);
    for (double x : {0.1, 1.0, 7.0}) {
      EXPECT_NEAR(renewal(s, x, RenewalMode::Function) / oracle::stable_renewal(alpha, x), 1.0, 1e-4);
      EXPECT_NEAR(renewal(s, x, RenewalMode::Density) / (alpha * oracle::stable_renewal(alpha, x) / x), 1.0,
                  1e-4);
    }
  }
  const auto drift = BernsteinSpec::drift(0.0, 1.0);
  EXPECT_NEAR(renewal(drift, 3.0, RenewalMode::Function), 3.0, 1e-9);
  const double u1 = renewal(kTempered, 1.0, RenewalMode::Function);
  const double u2 = renewal(kTempered, 2.0, RenewalMode::Function);
  EXPECT_LT(u1, u2);
  EXPECT_LE(u2, 2.0 * u1);
}

TEST(Laplace, FiniteActivityRejected) {
  try {
    subordinator_density(BernsteinSpec::drift(0.5, 1.0), 1.0, 2.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::UnsupportedSpec);
  }
}

TEST(Laplace, DriftSupportEdges) {
  const auto spec = BernsteinSpec::stable(0.5, 0.0, 0.5);
  EXPECT_EQ(subordinator_density(spec, 2.0, 0.9), 0.0);
  EXPECT_GT(subordinator_density(spec, 2.0, 1.5), 0.0);
  EXPECT_EQ(inverse_density(spec, 1.0, 2.0), 0.0);
  EXPECT_EQ(inverse_density(spec, 1.0, 2.5), 0.0);
  EXPECT_GT(inverse_density(spec, 1.0, 1.5), 0.0);
  EXPECT_NEAR(integrate([&](double s) { return inverse_density(spec, 1.0, s); }, 0.0, 2.0), 1.0, 1e-4);
}

TEST(Laplace, DensityField) {
  DensityField field{kStable, DensityKind::InverseDensity, {}};
  EXPECT_DOUBLE_EQ(field(1.0, 0.7), inverse_density(kStable, 1.0, 0.7));
  field.kind = DensityKind::RenewalFunction;
  EXPECT_DOUBLE_EQ(field(123.0, 2.0), renewal(kStable, 2.0, RenewalMode::Function));
}

TEST(LaplaceProperty, MethodsAgree) {
  InversionConfig talbot;
  talbot.cross_check = false;
  InversionConfig gs = talbot;
  gs.method = InversionMethod::GaverStehfest;
  for (const auto& spec : {kStable, kTempered}) {
    for (double x : {0.3, 1.0, 2.5}) {
      const double a = subordinator_density(spec, 1.0, x, talbot);
      const double b = subordinator_density(spec, 1.0, x, gs);
      EXPECT_NEAR(a, b, 1e-4 * a);
      const double c = inverse_tail_cdf(spec, 1.0, x, talbot);
      const double d = inverse_tail_cdf(spec, 1.0, x, gs);
      EXPECT_NEAR(c, d, 1e-4 * c);
    }
  }
}

TEST(LaplaceProperty, ConvolutionPathAgrees) {
  DensityOptions conv;
  conv.path = DensityPath::Convolution;
  for (const auto& spec : {kStable, kTempered, BernsteinSpec::tempered(0.4, 2.0, 0.0, 0.3)}) {
    for (double t : {0.3, 1.0, 2.2}) {
      for (double s : {0.05, 0.4, 1.1, 2.0}) {
        const double inv = inverse_density(spec, t, s);
        const double cv = inverse_density(spec, t, s, conv);
        if (inv == 0.0) {
          EXPECT_EQ(cv, 0.0);
          continue;
        }
        EXPECT_NEAR(cv / inv, 1.0, 1e-3) << "t=" << t << " s=" << s;
      }
    }
  }
}

TEST(LaplaceProperty, TotalMassOfHittingTime) {
  for (const auto& spec : {kStable, kTempered}) {
    for (double t : {0.5, 1.0, 3.0}) {
      const double m = integrate([&](double s) { return inverse_density(spec, t, s); }, 0.0, 60.0);
      EXPECT_NEAR(m, 1.0, 1e-4) << "t=" << t;
    }
  }
}

TEST(LaplaceProperty, TailCdfIsIntegratedDensity) {
  for (const auto& spec : {kStable, kTempered}) {
    double prev = 1.0;
    for (double s = 0.0; s <= 5.0; s += 0.25) {
      const double c = inverse_tail_cdf(spec, 1.5, s);
      EXPECT_GE(c, 0.0);
      EXPECT_LE(c, prev + 1e-12);
      prev = c;
      const double tail = integrate([&](double w) { return inverse_density(spec, 1.5, w); }, s, s + 60.0);
      EXPECT_NEAR(c, tail, 1e-4) << "s=" << s;
    }
  }
}

TEST(LaplaceProperty, HittingTimeConcentratesAtZero) {
  // l_h -> delta_0: mass beyond eps vanishes as h decreases.
  for (const auto& spec : {kStable, kTempered}) {
    double prev = 1.0;
    for (double h : {1e-1, 1e-2, 1e-3, 1e-4}) {
      const double beyond = inverse_tail_cdf(spec, h, 0.1);
      EXPECT_LT(beyond, prev);
      prev = beyond;
    }
    EXPECT_LT(prev, 1e-3);
  }
}

TEST(LaplaceProperty, RenewalMonotoneSubadditive) {
  for (const auto& spec : {kStable, kTempered, BernsteinSpec::stable(0.5, 0.3, 0.5)}) {
    std::vector<double> xs, us;
    for (double x = 0.1; x <= 6.0; x += 0.3) {
      xs.push_back(x);
      us.push_back(renewal(spec, x, RenewalMode::Function));
      EXPECT_GE(renewal(spec, x, RenewalMode::Density), 0.0);
    }
    for (std::size_t i = 1; i < us.size(); ++i) EXPECT_GT(us[i], us[i - 1]);
    for (std::size_t i = 0; i < xs.size(); ++i) {
      for (std::size_t j = 0; i + j + 2 < xs.size(); ++j) {
        const double sum = renewal(spec, xs[i] + xs[j], RenewalMode::Function);
        EXPECT_LE(sum, us[i] + us[j] + 1e-9);
      }
    }
  }
}
