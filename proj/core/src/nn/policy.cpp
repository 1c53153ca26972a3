#include "rap/nn/policy.hpp"

#include "rap/errors.hpp"
#include "rap/nn/gaussian.hpp"
#include "rap/nn/mlp.hpp"

namespace rap::nn {

ActorCritic make_actor_critic(int obs_dim, int action_dim, std::span<const int> hidden, Rng& rng) {
  if (obs_dim < 1 || action_dim < 1) throw ConfigError("make_actor_critic: dimensions must be >= 1");
  ActorCritic m;
  const auto policy_shapes = mlp_shapes(obs_dim, hidden, action_dim);
  const auto value_shapes = mlp_shapes(obs_dim, hidden, 1);
  m.policy = xavier_init(policy_shapes, rng, action_dim);
  m.value = xavier_init(value_shapes, rng, 0);
  return m;
}

PolicyStep act(const ActorCritic& model, std::span<const double> obs, Rng& rng) {
  const Vector mean = mlp_forward(model.policy, obs);
  auto sample = gaussian_sample(std::span<const double>(mean.data(), static_cast<std::size_t>(mean.size())),
                                std::span<const double>(model.policy.log_std.data(),
                                                        static_cast<std::size_t>(model.policy.log_std.size())),
                                rng);
  return {std::move(sample.action), sample.logp, state_value(model, obs)};
}

double state_value(const ActorCritic& model, std::span<const double> obs) {
  return mlp_forward(model.value, obs)[0];
}

bool bit_identical(const ActorCritic& a, const ActorCritic& b) {
  return bit_identical(a.policy, b.policy) && bit_identical(a.value, b.value);
}

std::uint64_t parameter_hash(const ActorCritic& model) {
  return parameter_hash(model.policy) * 0x9e3779b97f4a7c15ULL ^ parameter_hash(model.value);
}

}  // namespace rap::nn
