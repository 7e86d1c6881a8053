#include "support/bundles.hpp"
#include "support/oracles.hpp"
#include "tensoropt/sampler/batch_size.hpp"
#include "tensoropt/sampler/bundle_sampler.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace tensoropt;
using testing_support::random_in_ball;
using testing_support::random_unit;
using testing_support::random_vec;

namespace {

// log of the Hoeffding tail 2·k₀^{i·n}·exp(−t²N/(2σ²)), evaluated directly.
double log_tail(int i, int p, double kappa, double eps, Eigen::Index dim, double sigma, double N) {
  const double t = kappa * std::pow(eps, double(p - i + 1) / p);
  const double k0 = 2.0 * i / std::log(1.5);
  return std::log(2.0) + i * double(dim) * std::log(k0) - t * t * N / (2.0 * sigma * sigma);
}

bool serfling_ok(double n, double m, double t, double sigma, double rhs) {
  if (n >= m) return true;
  return t * t * n * n / (2.0 * sigma * sigma * (n + 1.0) * (1.0 - n / m)) >= rhs;
}

}  // namespace

TEST(BatchOnline, ExactSentinelAndValidation) {
  EXPECT_FALSE(batch_size_online(1, 3, 0.0, 1e-2, 0.1, 10, 1.0).has_value());
  EXPECT_THROW(batch_size_online(4, 3, 1.0, 1e-2, 0.1, 10, 1.0), InvalidArgument);
  EXPECT_THROW(batch_size_online(1, 3, 1.0, 0.0, 0.1, 10, 1.0), InvalidArgument);
  EXPECT_THROW(batch_size_online(1, 3, 1.0, 1e-2, 1.5, 10, 1.0), InvalidArgument);
}

TEST(BatchOnline, NumericInstanceAgainstTail) {
  const auto n = batch_size_online(1, 3, 1.0, 0.01, 0.1, 10, 1.0);
  ASSERT_TRUE(n.has_value());
  EXPECT_LE(log_tail(1, 3, 1.0, 0.01, 10, 1.0, double(*n)), std::log(0.1) + 1e-12);
  EXPECT_GT(log_tail(1, 3, 1.0, 0.01, 10, 1.0, double(*n - 1)), std::log(0.1));
}

TEST(BatchOnline, KappaDoublingQuartersSize) {
  for (int i = 1; i <= 3; ++i) {
    for (double kappa : {0.3, 1.0, 5.0}) {
      const auto a = *batch_size_online(i, 3, kappa, 1e-3, 0.1, 20, 2.0);
      const auto b = *batch_size_online(i, 3, 2.0 * kappa, 1e-3, 0.1, 20, 2.0);
      EXPECT_LE(std::abs(double(a) - 4.0 * double(b)), 4.0);
    }
  }
}

TEST(BatchOnline, EpsilonExponents) {
  for (int p : {2, 3}) {
    for (int i = 1; i <= p; ++i) {
      const double big = double(*batch_size_online(i, p, 1.0, 1e-3, 0.1, 20, 1.0));
      const double small = double(*batch_size_online(i, p, 1.0, 1e-4, 0.1, 20, 1.0));
      const double expected = std::pow(10.0, 2.0 * (p - i + 1) / p);
      EXPECT_NEAR(small / big, expected, expected * 2.0 / big + 1e-9) << "p=" << p << " i=" << i;
    }
  }
}

TEST(BatchOnline, Monotonicity) {
  for (int i = 1; i <= 3; ++i) {
    std::int64_t prev = std::numeric_limits<std::int64_t>::max();
    for (double kappa : {0.1, 0.5, 1.0, 4.0}) {
      const auto n = *batch_size_online(i, 3, kappa, 1e-3, 0.1, 10, 1.0);
      EXPECT_LE(n, prev);
      prev = n;
    }
    prev = std::numeric_limits<std::int64_t>::max();
    for (double eps : {1e-5, 1e-4, 1e-3, 1e-2}) {
      const auto n = *batch_size_online(i, 3, 1.0, eps, 0.1, 10, 1.0);
      EXPECT_LE(n, prev);
      prev = n;
    }
    prev = std::numeric_limits<std::int64_t>::max();
    for (double delta : {1e-4, 1e-2, 0.1, 1.0}) {
      const auto n = *batch_size_online(i, 3, 1.0, 1e-3, delta, 10, 1.0);
      EXPECT_LE(n, prev);
      prev = n;
    }
    prev = 0;
    for (double sigma : {0.1, 1.0, 3.0}) {
      const auto n = *batch_size_online(i, 3, 1.0, 1e-3, 0.1, 10, sigma);
      EXPECT_GE(n, prev);
      prev = n;
    }
  }
}

TEST(BatchOnline, DecreasesWithOrderUpToDimensionFactor) {
  const double delta = 0.1;
  const Eigen::Index dim = 20;
  double prev = std::numeric_limits<double>::infinity();
  for (int i = 1; i <= 3; ++i) {
    const double k0 = 2.0 * i / std::log(1.5);
    const double dim_factor = i * double(dim) * std::log(k0) + std::log(2.0 / delta);
    const double normalized = double(*batch_size_online(i, 3, 1.0, 1e-3, delta, dim, 1.0)) / dim_factor;
    EXPECT_LE(normalized, prev);
    prev = normalized;
  }
}

TEST(BatchOffline, Basics) {
  EXPECT_EQ(*batch_size_offline(1, 3, 1.0, 1e-3, 0.1, 1, 10, 1.0), 1);
  for (std::int64_t m : {2, 10, 100, 5000}) {
    EXPECT_LE(*batch_size_offline(1, 3, 1.0, 1e-4, 0.1, m, 10, 1.0), m);
  }
  EXPECT_FALSE(batch_size_offline(2, 3, 0.0, 1e-3, 0.1, 100, 10, 1.0).has_value());
  EXPECT_EQ(*batch_size_offline(2, 3, 1.0, 1e-3, 0.1, 100, 10, 0.0), 1);
}

TEST(BatchOffline, SmallestSatisfying) {
  const double eps = 1e-2, delta = 0.05, sigma = 1.5;
  for (int i = 1; i <= 3; ++i) {
    for (std::int64_t m : {500, 5000, 100000}) {
      const auto n = *batch_size_offline(i, 3, 1.0, eps, delta, m, 8, sigma);
      const double t = std::pow(eps, (4.0 - i) / 3.0);
      const double rhs = i * 8.0 * std::log(2.0 * i / std::log(1.5)) + std::log(2.0 / delta);
      EXPECT_TRUE(serfling_ok(double(n), double(m), t, sigma, rhs));
      if (n > 1) EXPECT_FALSE(serfling_ok(double(n - 1), double(m), t, sigma, rhs));
    }
  }
}

TEST(BatchOffline, AtMostOnlinePlusOne) {
  // With matched ranges, without-replacement sizing never exceeds the i.i.d.
  // size by more than the (n+1)/n slack in the Serfling denominator.
  for (int i = 1; i <= 3; ++i) {
    for (double eps : {1e-1, 1e-2, 1e-3}) {
      for (std::int64_t m : {50, 1000, 100000}) {
        const auto on = *batch_size_online(i, 3, 1.0, eps, 0.1, 10, 2.0);
        const auto off = *batch_size_offline(i, 3, 1.0, eps, 0.1, m, 10, 2.0);
        EXPECT_LE(off, on + 1);
        if (on < m && double(on) * double(on + 1) >= double(m)) EXPECT_LE(off, on);
      }
    }
  }
}

TEST(BatchPlan, LemmaPlanSplitsDelta) {
  const Problem p = make_logistic(5, 300, 1e-3, 1);
  const LipschitzProfile lp = p.lipschitz_profile(Vector::Zero(5), 3.0);
  const InexactnessBudget bud{1e-2, {1.0, 2.0, 6.0}};
  const BatchPlan off = make_batch_plan(p, bud, 3, 0.3, SamplingMode::kOffline, lp);
  ASSERT_EQ(off.order(), 3);
  for (int i = 1; i <= 3; ++i) {
    EXPECT_EQ(*off.n[i - 1], *batch_size_offline(i, 3, bud.kappa_at(i), 1e-2, 0.1, 300, 5, lp));
  }
  off.validate(300);
  const BatchPlan on = make_batch_plan(p, bud, 3, 0.3, SamplingMode::kOnline, lp);
  EXPECT_EQ(*on.n[0], *batch_size_online(1, 3, 1.0, 1e-2, 0.1, 5, lp));
  EXPECT_THROW(uniform_batch_plan(3, 301, SamplingMode::kOffline).validate(300), InvalidArgument);
}

TEST(SampleBundle, FullBatchIsExact) {
  std::mt19937_64 rng(2);
  const Problem p = make_logistic(6, 80, 1e-3, 2);
  const Vector x = random_vec(6, rng);
  OracleCounters cost;
  const DerivativeBundle s = sample_bundle(p, x, uniform_batch_plan(3, 80, SamplingMode::kOffline), rng, &cost);
  const DerivativeBundle e = exact_bundle(p, x, 3);
  EXPECT_LE((s.g - e.g).norm(), 1e-12);
  EXPECT_LE((s.b - e.b).norm(), 1e-12);
  const Vector d = random_unit(6, rng);
  EXPECT_LE((s.t->apply2(d) - e.t->apply2(d)).norm(), 1e-12);
  EXPECT_EQ(cost.grad, 80);
  EXPECT_EQ(cost.third, 80);
}

TEST(SampleBundle, SingleComponentIsExact) {
  std::mt19937_64 rng(3);
  const Problem q = make_quadratic(4, 1);
  const Vector x = random_vec(4, rng);
  for (SamplingMode mode : {SamplingMode::kOffline, SamplingMode::kOnline}) {
    const DerivativeBundle s = sample_bundle(q, x, uniform_batch_plan(2, 1, mode), rng);
    EXPECT_LE((s.g - q.gradient(x)).norm(), 1e-12);
    EXPECT_LE((s.b - q.hessian(x)).norm(), 1e-12);
  }
}

TEST(SampleBundle, OnlineGradientUnbiased) {
  std::mt19937_64 rng(4);
  const Problem p = make_logistic(5, 400, 1e-3, 3);
  const Vector x = random_vec(5, rng);
  const BatchPlan plan = uniform_batch_plan(2, 8, SamplingMode::kOnline);
  const int reps = 1000;
  Vector sum = Vector::Zero(5), sum2 = Vector::Zero(5);
  for (int r = 0; r < reps; ++r) {
    const Vector g = sample_bundle(p, x, plan, rng).g;
    sum += g;
    sum2 += g.cwiseProduct(g);
  }
  const Vector mean = sum / reps;
  const Vector var = sum2 / reps - mean.cwiseProduct(mean);
  const Vector exact = p.gradient(x);
  for (Eigen::Index k = 0; k < 5; ++k) {
    EXPECT_LE(std::abs(mean(k) - exact(k)), 3.0 * std::sqrt(var(k) / reps)) << "coordinate " << k;
  }
}

TEST(VerifyCondition, ExactAndBoundary) {
  std::mt19937_64 rng(5);
  const Problem p = make_logistic(6, 50, 1e-3, 4);
  const Vector x = random_vec(6, rng);
  const InexactnessBudget bud{1e-3, {1.0, 1.0, 1.0}};
  const ConditionReport e = verify_condition(p, exact_bundle(p, x, 3), bud, 16, 1);
  for (double r : e.ratio) EXPECT_LE(r, 1e-9);
  EXPECT_TRUE(e.all_pass());

  DerivativeBundle b = exact_bundle(p, x, 3);
  b.g += 1e-3 * random_unit(6, rng);
  const ConditionReport r = verify_condition(p, b, bud, 16, 1);
  EXPECT_NEAR(r.ratio[0], 1.0, 1e-9);
  EXPECT_LE(r.ratio[1], 1e-9);
}

TEST(VerifyCondition, KnownPerturbationSizes) {
  std::mt19937_64 rng(6);
  const Problem p = make_logistic(5, 40, 1e-3, 5);
  const InexactnessBudget bud{1e-2, {1.0, 1.0, 1.0}};
  const DerivativeBundle b = testing_support::perturbed_bundle(p, random_vec(5, rng), 3, bud, {0.3, 0.6, 0.4}, rng);
  const ConditionReport r = verify_condition(p, b, bud, 64, 2);
  EXPECT_NEAR(r.ratio[0], 0.3, 1e-9);
  EXPECT_NEAR(r.ratio[1], 0.6, 1e-9);
  EXPECT_NEAR(r.ratio[2], 0.4, 1e-3);
  EXPECT_TRUE(r.all_pass());
  const InexactnessBudget tight{1e-2, {1.0, 1.0, 0.7}};
  EXPECT_FALSE(verify_condition(p, b, tight, 64, 2).pass[2]);
}

TEST(VerifyCondition, LemmaSizedBatchesPassSmall) {
  std::mt19937_64 rng(7);
  const Problem p = make_logistic(5, 500, 1e-3, 6);
  const LipschitzProfile lp = p.lipschitz_profile(Vector::Zero(5), 3.0);
  const InexactnessBudget bud{0.1, {1.0, 2.0, 6.0}};
  for (SamplingMode mode : {SamplingMode::kOffline, SamplingMode::kOnline}) {
    const BatchPlan plan = make_batch_plan(p, bud, 3, 0.1, mode, lp);
    int pass[3] = {0, 0, 0};
    const int trials = 30;
    for (int t = 0; t < trials; ++t) {
      const Vector x = random_in_ball(5, 3.0, rng);
      const ConditionReport r = verify_condition(p, sample_bundle(p, x, plan, rng), bud, 16, t);
      for (int i = 0; i < 3; ++i) pass[i] += r.pass[i];
    }
    for (int i = 0; i < 3; ++i) EXPECT_GE(pass[i], 27);
  }
}
