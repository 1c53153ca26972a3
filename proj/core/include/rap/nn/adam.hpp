#pragma once

#include <cstdint>

#include "rap/nn/parameters.hpp"

namespace rap::nn {

struct AdamConfig {
  double lr = 3e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

struct OptimizerState {
  GradientSet first_moment;
  GradientSet second_moment;
  std::int64_t step = 0;

  static OptimizerState for_params(const LayerStack& params);
};

/// Bias-corrected Adam update in place. Throws NumericError (and leaves
/// params/state untouched) if any gradient is non-finite.
void adam_step(ParameterSet& params, const GradientSet& grads, OptimizerState& state,
               const AdamConfig& cfg);

}  // namespace rap::nn
