#pragma once

#include <span>
#include <vector>

namespace rap::env {

inline constexpr double kAgentActionBound = 1.0;
inline constexpr double kAdversaryActionBound = 0.25;

std::vector<double> clip_agent_action(std::span<const double> action);
std::vector<double> clip_adversary_action(std::span<const double> action);

/// Noisy-action perturbation: clip(a_agent, -1, 1) + alpha * clip(a_adv, -0.25, 0.25).
/// The operands are clipped independently and the sum is not re-clipped, so
/// the adversary always reaches the dynamics.
std::vector<double> combine_actions(std::span<const double> agent_action,
                                    std::span<const double> adversary_action, double alpha);

}  // namespace rap::env
