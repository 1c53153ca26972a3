#include "rap/nn/gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "rap/errors.hpp"

namespace rap::nn {
namespace {

const double kHalfLog2Pi = 0.5 * std::log(2.0 * std::numbers::pi);
const double kHalfLog2PiE = 0.5 * std::log(2.0 * std::numbers::pi * std::numbers::e);

void require_finite(const char* what, std::span<const double> xs) {
  for (double x : xs)
    if (!std::isfinite(x)) throw NumericError(std::string(what) + " contains non-finite values");
}

}  // namespace

double clamp_log_std(double log_std) { return std::clamp(log_std, kLogStdMin, kLogStdMax); }

GaussianSample gaussian_sample(std::span<const double> mean, std::span<const double> log_std,
                               Rng& rng) {
  if (mean.size() != log_std.size()) throw ShapeError("gaussian_sample: mean/log_std size mismatch");
  require_finite("gaussian_sample: mean", mean);
  require_finite("gaussian_sample: log_std", log_std);
  std::normal_distribution<double> normal(0.0, 1.0);
  GaussianSample out;
  out.action.resize(static_cast<Eigen::Index>(mean.size()));
  for (std::size_t d = 0; d < mean.size(); ++d)
    out.action[static_cast<Eigen::Index>(d)] = mean[d] + std::exp(clamp_log_std(log_std[d])) * normal(rng);
  out.logp = gaussian_logp(mean, log_std,
                           std::span<const double>(out.action.data(), mean.size()));
  return out;
}

double gaussian_logp(std::span<const double> mean, std::span<const double> log_std,
                     std::span<const double> action) {
  if (mean.size() != log_std.size() || mean.size() != action.size())
    throw ShapeError("gaussian_logp: dimension mismatch");
  double logp = 0.0;
  for (std::size_t d = 0; d < mean.size(); ++d) {
    const double ls = clamp_log_std(log_std[d]);
    const double z = (action[d] - mean[d]) * std::exp(-ls);
    logp += -0.5 * z * z - ls - kHalfLog2Pi;
  }
  return logp;
}

double gaussian_entropy(std::span<const double> log_std) {
  double h = 0.0;
  for (double ls : log_std) h += clamp_log_std(ls) + kHalfLog2PiE;
  return h;
}

Var gaussian_logp(Tape& tape, Var mean, Var log_std, Var actions) {
  const auto& mv = tape.value(mean);
  if (tape.value(log_std).rows() != 1 || tape.value(log_std).cols() != mv.cols())
    throw ShapeError("gaussian_logp: log_std must be a 1 x action_dim row");
  const int rows = static_cast<int>(mv.rows());
  Var ls = tape.broadcast_rows(tape.clip(log_std, kLogStdMin, kLogStdMax), rows);
  Var z = tape.mul(tape.sub(actions, mean), tape.exp(tape.neg(ls)));
  Var per_dim = tape.add_scalar(tape.sub(tape.scale(tape.square(z), -0.5), ls), -kHalfLog2Pi);
  return tape.row_sum(per_dim);
}

Var gaussian_entropy(Tape& tape, Var log_std) {
  const auto d = static_cast<double>(tape.value(log_std).size());
  return tape.add_scalar(tape.sum(tape.clip(log_std, kLogStdMin, kLogStdMax)), d * kHalfLog2PiE);
}

}  // namespace rap::nn
