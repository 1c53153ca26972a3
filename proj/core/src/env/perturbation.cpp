#include "rap/env/perturbation.hpp"

#include <algorithm>

#include "rap/errors.hpp"

namespace rap::env {
namespace {

std::vector<double> clip_all(std::span<const double> a, double bound) {
  std::vector<double> out(a.size());
  std::transform(a.begin(), a.end(), out.begin(), [bound](double v) { return std::clamp(v, -bound, bound); });
  return out;
}

}  // namespace

std::vector<double> clip_agent_action(std::span<const double> action) {
  return clip_all(action, kAgentActionBound);
}

std::vector<double> clip_adversary_action(std::span<const double> action) {
  return clip_all(action, kAdversaryActionBound);
}

std::vector<double> combine_actions(std::span<const double> agent_action,
                                    std::span<const double> adversary_action, double alpha) {
  if (agent_action.size() != adversary_action.size())
    throw ShapeError("combine_actions: agent and adversary action lengths differ");
  if (!(alpha >= 0.0)) throw ConfigError("combine_actions: alpha must be >= 0");
  auto total = clip_agent_action(agent_action);
  const auto adv = clip_adversary_action(adversary_action);
  for (std::size_t i = 0; i < total.size(); ++i) total[i] += alpha * adv[i];
  return total;
}

}  // namespace rap::env
