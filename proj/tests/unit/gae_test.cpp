#include <gtest/gtest.h>

#include <cmath>

#include "rap/errors.hpp"
#include "rap/ppo/gae.hpp"
#include "rap/rng.hpp"
#include "test_support.hpp"

using namespace rap;
using namespace rap::ppo;

TEST(Gae, ZeroRewardsZeroValues) {
  const std::vector<double> zeros(7, 0.0);
  const auto g = gae(zeros, zeros, 0.0, 0.99, 0.95);
  for (double a : g.advantages) EXPECT_EQ(a, 0.0);
  for (double r : g.returns) EXPECT_EQ(r, 0.0);
}

TEST(Gae, LambdaZeroIsTdResidual) {
  const std::vector<double> r{1.0, -0.5, 2.0}, v{0.3, 0.7, -0.1};
  const double boot = 0.4, gamma = 0.9;
  const auto g = gae(r, v, boot, gamma, 0.0);
  EXPECT_EQ(g.advantages[0], r[0] + gamma * v[1] - v[0]);
  EXPECT_EQ(g.advantages[1], r[1] + gamma * v[2] - v[1]);
  EXPECT_EQ(g.advantages[2], r[2] + gamma * boot - v[2]);
}

TEST(Gae, TwoStepHandExample) {
  const std::vector<double> r{1.0, 1.0}, v{0.5, 0.5};
  const auto g = gae(r, v, 0.0, 0.99, 0.95);
  // delta_1 = 1 - 0.5 = 0.5, delta_0 = 1 + 0.99*0.5 - 0.5 = 0.995
  EXPECT_NEAR(g.advantages[1], 0.5, 1e-12);
  EXPECT_NEAR(g.advantages[0], 0.995 + 0.99 * 0.95 * 0.5, 1e-12);
  const auto oracle = rap::testing::gae_double_sum(r, v, 0.0, 0.99, 0.95);
  for (int t = 0; t < 2; ++t) EXPECT_NEAR(g.advantages[t], oracle[t], 1e-12);
  EXPECT_NEAR(g.returns[0], g.advantages[0] + 0.5, 1e-15);
}

TEST(Gae, MatchesDoubleSumOnRandomTrajectories) {
  auto rng = derive_stream(123, "gae");
  std::uniform_int_distribution<int> len(1, 16);
  std::uniform_real_distribution<double> u(-5.0, 5.0), unit(0.0, 1.0);
  for (int trial = 0; trial < 500; ++trial) {
    const int n = len(rng);
    std::vector<double> r(n), v(n);
    for (int t = 0; t < n; ++t) {
      r[t] = u(rng);
      v[t] = u(rng);
    }
    const double boot = u(rng), gamma = unit(rng), lambda = unit(rng);
    const auto g = gae(r, v, boot, gamma, lambda);
    const auto oracle = rap::testing::gae_double_sum(r, v, boot, gamma, lambda);
    for (int t = 0; t < n; ++t) {
      ASSERT_NEAR(g.advantages[t], oracle[t], 1e-10) << "trial " << trial << " t " << t;
      ASSERT_NEAR(g.returns[t], oracle[t] + v[t], 1e-10);
    }
  }
}

TEST(Gae, LambdaOneIsDiscountedReturnMinusValue) {
  auto rng = derive_stream(5, "gae");
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  const int n = 12;
  std::vector<double> r(n), v(n);
  for (int t = 0; t < n; ++t) {
    r[t] = u(rng);
    v[t] = u(rng);
  }
  const double boot = 1.7, gamma = 0.97;
  const auto g = gae(r, v, boot, gamma, 1.0);
  for (int t = 0; t < n; ++t) {
    double ret = 0.0;
    for (int k = t; k < n; ++k) ret += std::pow(gamma, k - t) * r[k];
    ret += std::pow(gamma, n - t) * boot;
    EXPECT_NEAR(g.advantages[t], ret - v[t], 1e-10);
  }
}

TEST(Gae, Errors) {
  const std::vector<double> a{1.0, 2.0}, b{1.0};
  EXPECT_THROW(gae(a, b, 0.0, 0.9, 0.9), ShapeError);
  EXPECT_THROW(gae(a, a, 0.0, 1.5, 0.9), ConfigError);
  EXPECT_THROW(gae(a, a, 0.0, 0.9, -0.1), ConfigError);
}
