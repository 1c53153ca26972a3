#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "rap/errors.hpp"
#include "rap/nn/gaussian.hpp"
#include "rap/nn/tape.hpp"

using namespace rap;
using namespace rap::nn;

TEST(Gaussian, StandardNormalAtZero) {
  const std::vector<double> mu{0.0}, ls{0.0}, a{0.0};
  EXPECT_NEAR(gaussian_logp(mu, ls, a), -0.5 * std::log(2 * std::numbers::pi), 1e-15);
  EXPECT_NEAR(gaussian_logp(mu, ls, a), -0.9189, 1e-4);
}

TEST(Gaussian, UnitEntropy) {
  const std::vector<double> ls{0.0};
  EXPECT_NEAR(gaussian_entropy(ls), 0.5 * std::log(2 * std::numbers::pi * std::numbers::e), 1e-15);
  EXPECT_NEAR(gaussian_entropy(ls), 1.4189, 1e-4);
}

TEST(Gaussian, LogpPeaksAtMean) {
  const std::vector<double> mu{0.4, -1.0}, ls{-0.3, 0.2};
  const double at_mean = gaussian_logp(mu, ls, mu);
  for (double d : {-0.5, -1e-3, 1e-3, 0.5}) {
    const std::vector<double> a{0.4 + d, -1.0 - d};
    EXPECT_LT(gaussian_logp(mu, ls, a), at_mean);
  }
}

TEST(Gaussian, SampleLogpIsSelfConsistent) {
  auto rng = derive_stream(4, "test");
  const std::vector<double> mu{0.3, -0.2}, ls{-1.0, 0.5};
  for (int i = 0; i < 100; ++i) {
    const auto s = gaussian_sample(mu, ls, rng);
    EXPECT_EQ(gaussian_logp(mu, ls, std::span<const double>(s.action.data(), 2)), s.logp);
  }
}

TEST(Gaussian, NarrowTailStaysWithinFourSigma) {
  auto rng = derive_stream(5, "test");
  const std::vector<double> mu{0.7}, ls{-5.0};
  const double sigma = std::exp(-5.0);
  int outside = 0;
  for (int i = 0; i < 100000; ++i) {
    const auto s = gaussian_sample(mu, ls, rng);
    if (std::fabs(s.action[0] - 0.7) > 4 * sigma) ++outside;
  }
  // P(|z| > 4) ~ 6.3e-5; allow at most 1e-4 of draws outside.
  EXPECT_LE(outside, 10);
}

TEST(Gaussian, LogStdIsClamped) {
  EXPECT_EQ(clamp_log_std(-9.0), kLogStdMin);
  EXPECT_EQ(clamp_log_std(9.0), kLogStdMax);
  const std::vector<double> lo{-9.0}, clamped{-5.0};
  EXPECT_EQ(gaussian_entropy(lo), gaussian_entropy(clamped));
}

TEST(Gaussian, MonteCarloEntropy) {
  auto rng = derive_stream(6, "test");
  const std::vector<double> mu{0.0, 1.0}, ls{0.3, -0.4};
  double acc = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) acc -= gaussian_sample(mu, ls, rng).logp;
  const double h = gaussian_entropy(ls);
  EXPECT_NEAR(acc / n, h, 0.01 * std::fabs(h));
}

TEST(Gaussian, RejectsBadInput) {
  auto rng = derive_stream(1, "test");
  const std::vector<double> mu{0.0, 0.0}, ls{0.0}, a{0.0, 0.0};
  EXPECT_THROW(gaussian_logp(mu, ls, a), ShapeError);
  const std::vector<double> bad{std::nan("")};
  const std::vector<double> one{0.0};
  EXPECT_THROW(gaussian_sample(bad, one, rng), NumericError);
}

TEST(Gaussian, TapeLogpGradientWrtMeanMatchesFiniteDifferences) {
  Matrix mean(3, 2), actions(3, 2), ls(1, 2);
  mean << 0.1, -0.4, 0.9, 0.2, -1.3, 0.5;
  actions << 0.3, -0.1, 0.2, 0.0, -1.0, 1.4;
  ls << -0.2, 0.6;
  Tape tape;
  const Var m = tape.leaf(mean);
  const Var l = tape.leaf(ls);
  const Var logp = gaussian_logp(tape, m, l, tape.constant(actions));
  tape.backward(tape.sum(logp));
  const double h = 1e-5;
  auto total = [&](const Matrix& mm) {
    double s = 0.0;
    for (int r = 0; r < 3; ++r)
      s += gaussian_logp(std::span<const double>(mm.row(r).data(), 2), std::span<const double>(ls.data(), 2),
                         std::span<const double>(actions.row(r).data(), 2));
    return s;
  };
  for (int i = 0; i < 6; ++i) {
    Matrix up = mean, down = mean;
    up.data()[i] += h;
    down.data()[i] -= h;
    const double fd = (total(up) - total(down)) / (2 * h);
    EXPECT_NEAR(tape.grad(m).data()[i], fd, 1e-5 * std::max(1.0, std::fabs(fd)));
  }
  // Row values agree with the scalar form.
  for (int r = 0; r < 3; ++r)
    EXPECT_NEAR(tape.value(logp)(r, 0),
                gaussian_logp(std::span<const double>(mean.row(r).data(), 2), std::span<const double>(ls.data(), 2),
                              std::span<const double>(actions.row(r).data(), 2)),
                1e-12);
}
