#pragma once

#include <span>

#include "rap/nn/parameters.hpp"
#include "rap/nn/tape.hpp"
#include "rap/rng.hpp"

namespace rap::nn {

inline constexpr double kLogStdMin = -5.0;
inline constexpr double kLogStdMax = 2.0;

double clamp_log_std(double log_std);

struct GaussianSample {
  Vector action;
  double logp = 0.0;
};

/// action = mean + exp(clamped log_std) * z with z ~ N(0, I).
GaussianSample gaussian_sample(std::span<const double> mean, std::span<const double> log_std,
                               Rng& rng);

/// Diagonal Gaussian log-density; log_std is clamped before use.
double gaussian_logp(std::span<const double> mean, std::span<const double> log_std,
                     std::span<const double> action);

/// sum_d (log_std_d + 0.5 * log(2*pi*e)), with clamping.
double gaussian_entropy(std::span<const double> log_std);

/// Tape versions. mean/actions are (batch x d), log_std is a 1 x d row.
/// gaussian_logp returns a (batch x 1) column, gaussian_entropy a scalar.
Var gaussian_logp(Tape& tape, Var mean, Var log_std, Var actions);
Var gaussian_entropy(Tape& tape, Var log_std);

}  // namespace rap::nn
