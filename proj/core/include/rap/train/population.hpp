#pragma once

#include <cstdint>
#include <vector>

#include "rap/nn/policy.hpp"
#include "rap/ppo/ppo.hpp"
#include "rap/train/config.hpp"

namespace rap::train {

/// Agent plus adversary population, with their optimizer states and the
/// bookkeeping of the last collection phase.
struct PopulationState {
  nn::ActorCritic agent;
  ppo::ActorCriticOptimizer agent_optimizer;
  std::vector<nn::ActorCritic> adversaries;
  std::vector<ppo::ActorCriticOptimizer> adversary_optimizers;
  /// J_i of the most recent iteration; sums to the rollout count J.
  std::vector<int> rollout_counts;
  int iterations_done = 0;
  std::int64_t env_steps = 0;
};

/// Xavier-initializes the agent (stream 0) and adversaries 1..n (stream i),
/// each from its own stream derived from cfg.seed.
PopulationState init_population(const TrainConfig& cfg);

/// Agent-visible observation length for the configured environment.
int observation_dim(env::EnvId id);
int action_dim(env::EnvId id);

}  // namespace rap::train
