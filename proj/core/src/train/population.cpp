#include "rap/train/population.hpp"

#include "rap/env/environment.hpp"
#include "rap/errors.hpp"

namespace rap::train {

int observation_dim(env::EnvId id) { return env::make_environment(id)->obs_dim(); }
int action_dim(env::EnvId id) { return env::make_environment(id)->action_dim(); }

PopulationState init_population(const TrainConfig& cfg) {
  if (cfg.n < 0) throw ConfigError("population size must be >= 0");
  const int obs = observation_dim(cfg.env_id);
  const int act = action_dim(cfg.env_id);
  PopulationState state;
  auto agent_rng = derive_stream(cfg.seed, "init", {0});
  state.agent = nn::make_actor_critic(obs, act, cfg.hidden, agent_rng);
  state.agent_optimizer = ppo::ActorCriticOptimizer::for_model(state.agent);
  const int n = cfg.adversary_count();
  for (int i = 1; i <= n; ++i) {
    auto rng = derive_stream(cfg.seed, "init", {static_cast<std::uint64_t>(i)});
    state.adversaries.push_back(nn::make_actor_critic(obs, act, cfg.hidden, rng));
    state.adversary_optimizers.push_back(ppo::ActorCriticOptimizer::for_model(state.adversaries.back()));
  }
  state.rollout_counts.assign(static_cast<std::size_t>(n), 0);
  return state;
}

}  // namespace rap::train
