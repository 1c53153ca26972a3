#include "rap/ppo/gae.hpp"

#include "rap/errors.hpp"

namespace rap::ppo {

GaeResult gae(std::span<const double> rewards, std::span<const double> values, double bootstrap,
              double gamma, double lambda) {
  if (rewards.size() != values.size())
    throw ShapeError("gae: rewards and values differ in length (" + std::to_string(rewards.size()) +
                     " vs " + std::to_string(values.size()) + ")");
  if (!(gamma >= 0.0 && gamma <= 1.0) || !(lambda >= 0.0 && lambda <= 1.0))
    throw ConfigError("gae: gamma and lambda must lie in [0, 1]");
  const std::size_t n = rewards.size();
  GaeResult out{std::vector<double>(n), std::vector<double>(n)};
  double next_value = bootstrap;
  double running = 0.0;
  for (std::size_t t = n; t-- > 0;) {
    const double delta = rewards[t] + gamma * next_value - values[t];
    running = delta + gamma * lambda * running;
    out.advantages[t] = running;
    out.returns[t] = running + values[t];
    next_value = values[t];
  }
  return out;
}

}  // namespace rap::ppo
