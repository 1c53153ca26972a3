#include "rap/nn/adam.hpp"

#include <cmath>

#include "rap/errors.hpp"

namespace rap::nn {

OptimizerState OptimizerState::for_params(const LayerStack& params) {
  return {GradientSet::zeros_like(params), GradientSet::zeros_like(params), 0};
}

void adam_step(ParameterSet& params, const GradientSet& grads, OptimizerState& state,
               const AdamConfig& cfg) {
  if (!params.same_shape(grads) || !params.same_shape(state.first_moment) ||
      !params.same_shape(state.second_moment))
    throw ShapeError("adam_step: parameter, gradient and moment shapes differ");
  if (!grads.all_finite()) throw NumericError("adam_step: non-finite gradient");

  const std::int64_t t = state.step + 1;
  const double correction1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(t));
  const double correction2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(t));

  auto p_blocks = params.blocks();
  auto g_blocks = grads.blocks();
  auto m_blocks = state.first_moment.blocks();
  auto v_blocks = state.second_moment.blocks();
  for (std::size_t b = 0; b < p_blocks.size(); ++b) {
    auto p = p_blocks[b];
    auto g = g_blocks[b];
    auto m = m_blocks[b];
    auto v = v_blocks[b];
    for (std::size_t i = 0; i < p.size(); ++i) {
      m[i] = cfg.beta1 * m[i] + (1.0 - cfg.beta1) * g[i];
      v[i] = cfg.beta2 * v[i] + (1.0 - cfg.beta2) * g[i] * g[i];
      const double m_hat = m[i] / correction1;
      const double v_hat = v[i] / correction2;
      p[i] -= cfg.lr * m_hat / (std::sqrt(v_hat) + cfg.eps);
    }
  }
  state.step = t;
}

}  // namespace rap::nn
