#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "subflow/ctrw.hpp"
#include "subflow/error.hpp"
#include "subflow/laplace.hpp"
#include "subflow/parallel.hpp"

using namespace subflow;

namespace {

const BernsteinSpec kStable = BernsteinSpec::stable(0.5);

CtrwConfig config(const BernsteinSpec& spec, double gamma, std::size_t paths, double horizon = 1.0) {
  return CtrwConfig{spec, gamma, horizon, paths, 42};
}

}  // namespace

TEST(Ctrw, JumpTailRatio) {
  const double gamma = 1e-4;
  JumpSampler sampler(kStable, gamma);
  Rng rng(5, 0, 0);
  const int n = 1000000;
  int above = 0;
  for (int i = 0; i < n; ++i) {
    const auto y = sampler(rng);
    ASSERT_FALSE(y.infinite);
    ASSERT_GT(y.value, gamma);
    above += y.value > 2 * gamma;
  }
  const double p = 1.0 / std::sqrt(2.0);
  const double se = std::sqrt(p * (1 - p) / n);
  EXPECT_NEAR(above / double(n), p, 3 * se);
}

TEST(Ctrw, TemperedJumpLaw) {
  // Pr{Y > y} = nu(y) / nu(gamma), for the rejection sampler.
  const auto spec = BernsteinSpec::tempered(0.5, 1.0);
  const double gamma = 1e-3;
  JumpSampler sampler(spec, gamma);
  Rng rng(9, 0, 0);
  const int n = 400000;
  const std::vector<double> ys{2e-3, 1e-2, 0.1, 1.0};
  std::vector<int> above(ys.size(), 0);
  for (int i = 0; i < n; ++i) {
    const double y = sampler(rng).value;
    for (std::size_t k = 0; k < ys.size(); ++k) above[k] += y > ys[k];
  }
  for (std::size_t k = 0; k < ys.size(); ++k) {
    const double p = eval_tail(spec, ys[k]) / eval_tail(spec, gamma);
    EXPECT_NEAR(above[k] / double(n), p, 4 * std::sqrt(p * (1 - p) / n)) << ys[k];
  }
}

TEST(Ctrw, InverseCdfRoundTrip) {
  for (const auto& spec : {kStable, BernsteinSpec::tempered(0.4, 2.0, 0.1)}) {
    JumpSampler sampler(spec, 1e-3);
    for (double u : {0.9, 0.5, 0.1, 0.02}) {
      const auto y = sampler.invert(u);
      if (y.infinite) continue;
      EXPECT_NEAR(eval_tail(spec, y.value) / (u * sampler.rate()), 1.0, 1e-10);
    }
  }
}

TEST(Ctrw, KillingAtom) {
  Rng rng(1, 0, 0);
  JumpSampler pure_killing(BernsteinSpec::drift(1.0, 0.0), 0.5);
  for (int i = 0; i < 100; ++i) EXPECT_TRUE(pure_killing(rng).infinite);
  JumpSampler no_killing(kStable, 1e-3);
  for (int i = 0; i < 10000; ++i) EXPECT_FALSE(no_killing(rng).infinite);
}

TEST(Ctrw, PureDriftPath) {
  const auto cfg = config(BernsteinSpec::drift(0.0, 1.0), 0.1, 1, 3.0);
  const auto path = simulate_path(cfg);
  EXPECT_TRUE(path.epochs.empty());
  for (double s : {0.0, 0.5, 2.9}) EXPECT_EQ(path.value(s).as_double(), s);
  EXPECT_DOUBLE_EQ(hitting_time(path, 1.7), 1.7);
}

TEST(Ctrw, InfiniteJumpGeometry) {
  SubordinatorPath p{0.5, 10.0, {0.3}, {JumpSize::inf()}};
  EXPECT_DOUBLE_EQ(p.lifetime(), 0.3);
  EXPECT_DOUBLE_EQ(hitting_time(p, 0.1), 0.2);
  EXPECT_DOUBLE_EQ(hitting_time(p, 1.0), 0.3);
  SubordinatorPath q{0.0, 10.0, {0.3}, {JumpSize::inf()}};
  EXPECT_DOUBLE_EQ(hitting_time(q, 0.1), 0.3);
  EXPECT_TRUE(q.value(0.5).infinite);
}

TEST(Ctrw, LaplaceFunctional) {
  const auto rows = ensemble_stats(config(kStable, 1e-4, 20000), Process::Subordinator, {1.0},
                                   Functional::laplace(1.0));
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_NEAR(rows[0].estimate, std::exp(-1.0), 3 * rows[0].std_error);
}

TEST(Ctrw, KilledSurvival) {
  const auto rows = ensemble_stats(config(BernsteinSpec::drift(1.0, 0.0), 0.1, 20000, 2.0),
                                   Process::Subordinator, {0.5, 1.0, 2.0}, Functional::survival());
  for (const auto& r : rows) EXPECT_NEAR(r.estimate, std::exp(-r.t), 3 * r.std_error);
}

TEST(Ctrw, ConfigErrors) {
  EXPECT_THROW(config(kStable, 0.0, 10).validate(), Error);
  EXPECT_THROW(config(kStable, 1e-3, 0).validate(), Error);
  EXPECT_THROW(simulate_hitting_time(config(BernsteinSpec::drift(0.0, 0.0), 0.1, 1), 0, 1.0), Error);
}

TEST(CtrwProperty, RateMonotoneAndJumpCountsNested) {
  double prev_rate = 0.0;
  std::vector<std::size_t> prev(50, 0);
  for (double gamma : {1e-1, 1e-2, 1e-3, 1e-4}) {
    auto cfg = config(BernsteinSpec::tempered(0.5, 1.0), gamma, 50);
    const double rate = JumpSampler(cfg.spec, gamma).rate();
    EXPECT_GT(rate, prev_rate);
    prev_rate = rate;
    for (std::size_t p = 0; p < 50; ++p) {
      const auto n = simulate_path(cfg, p).epochs.size();
      EXPECT_GE(n, prev[p]);
      prev[p] = n;
    }
  }
}

TEST(CtrwProperty, PathsNonDecreasing) {
  const auto cfg = config(BernsteinSpec::stable(0.6, 0.2, 0.3), 1e-3, 20, 3.0);
  for (std::size_t p = 0; p < 20; ++p) {
    const auto path = simulate_path(cfg, p);
    for (std::size_t k = 1; k < path.epochs.size(); ++k) EXPECT_GT(path.epochs[k], path.epochs[k - 1]);
    for (const auto& y : path.sizes) EXPECT_TRUE(y.infinite || y.value > cfg.gamma);
    double prev = 0.0;
    for (double s = 0.0; s <= 3.0; s += 0.01) {
      const double v = path.value(s).as_double();
      EXPECT_GE(v, prev);
      prev = v;
    }
  }
}

TEST(CtrwProperty, ExchangeIdentityPathwise) {
  // L(t) > s exactly when sigma(s) <= t, path by path.
  const auto cfg = config(kStable, 1e-4, 4000, 4.0);
  const std::vector<double> ss{0.2, 0.7, 1.5};
  const auto hit = simulate_samples(cfg, Process::Hitting, {1.0});
  const auto sub = simulate_samples(cfg, Process::Subordinator, ss);
  for (std::size_t k = 0; k < ss.size(); ++k) {
    std::size_t agree = 0;
    for (std::size_t p = 0; p < cfg.n_paths; ++p) agree += (hit[0][p] > ss[k]) == (sub[k][p] <= 1.0);
    EXPECT_EQ(agree, cfg.n_paths);
    // and against the inverted law
    const double frac = std::count_if(hit[0].begin(), hit[0].end(), [&](double v) { return v > ss[k]; }) /
                        double(cfg.n_paths);
    const double ref = inverse_tail_cdf(kStable, 1.0, ss[k]);
    EXPECT_NEAR(frac, ref, 4 * std::sqrt(ref * (1 - ref) / cfg.n_paths));
  }
}

TEST(CtrwProperty, DeterministicAcrossThreadCounts) {
  const auto cfg = config(BernsteinSpec::tempered(0.5, 1.0), 1e-3, 3000);
  set_max_threads(1);
  const auto a = ensemble_stats(cfg, Process::Hitting, {0.5, 1.0}, Functional::mean());
  set_max_threads(4);
  const auto b = ensemble_stats(cfg, Process::Hitting, {0.5, 1.0}, Functional::mean());
  set_max_threads(0);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].estimate, b[i].estimate);
    EXPECT_EQ(a[i].std_error, b[i].std_error);
  }
}
