#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "rap/ppo/ppo.hpp"
#include "rap/train/config.hpp"
#include "rap/train/population.hpp"

namespace rap::train {

struct IterationStats {
  int iteration = 0;
  /// Undiscounted agent return over episodes that finished this iteration
  /// (all rollouts if none finished).
  double mean_return = 0.0;
  double std_return = 0.0;
  int rollouts = 0;
  std::vector<int> adversary_rollouts;
  /// Mean adversary return (negated agent return) over the rollouts each adversary played.
  std::vector<double> adversary_mean_return;
  std::int64_t env_steps = 0;
  ppo::UpdateStats agent_update;
  std::vector<ppo::UpdateStats> adversary_updates;
};

/// One collection + update phase. Collects exactly ppo.train_batch_size agent
/// transitions (the last rollout is truncated and bootstrapped), sampling a
/// fresh adversary (rap/single) or fresh dynamics (domain_randomization) per
/// rollout. Then updates the agent on everything and each adversary on
/// exactly the rollouts it played; adversaries with no rollouts are untouched.
IterationStats train_iteration(PopulationState& state, const TrainConfig& cfg);

struct TrainOptions {
  /// When set, policies are checkpointed every cfg.checkpoint_every iterations and at the end.
  std::filesystem::path checkpoint_dir;
  std::function<void(const IterationStats&)> on_iteration;
};

struct TrainResult {
  PopulationState state;
  std::vector<IterationStats> curve;
  std::vector<std::filesystem::path> checkpoints;
};

TrainResult train(const TrainConfig& cfg, const TrainOptions& options = {});

/// agent.ckpt, adversary_1.ckpt, ... in `dir`; returns the written paths.
std::vector<std::filesystem::path> save_population(const PopulationState& state, const TrainConfig& cfg,
                                                   const std::filesystem::path& dir);

struct LoadedPopulation {
  nn::ActorCritic agent;
  std::vector<nn::ActorCritic> adversaries;
};
/// Reads agent.ckpt and adversary_<i>.ckpt for i = 1, 2, ... until one is missing.
LoadedPopulation load_population(const std::filesystem::path& dir);

/// iteration,mean_return,std_return,rollouts,env_steps,J_1..J_n
std::string curve_csv(const std::vector<IterationStats>& curve, int n_adversaries);
/// iteration,policy,mean_reward,loss,surrogate,value_loss,entropy,kl,grad_norm,transitions,skipped
std::string train_log_csv(const std::vector<IterationStats>& curve);

}  // namespace rap::train
