#pragma once

#include <cstdint>
#include <optional>

#include "rap/env/dynamics_params.hpp"
#include "rap/nn/policy.hpp"
#include "rap/ppo/trajectory.hpp"
#include "rap/rng.hpp"

namespace rap::train {

/// Uniform draw from {1, ..., n}. n must be >= 1.
int sample_adversary(int n, Rng& rng);

/// Independent generators for one rollout.
struct RolloutStreams {
  Rng env;
  Rng agent;
  Rng adversary;

  static RolloutStreams derive(std::uint64_t seed, std::uint64_t iteration, std::uint64_t rollout);
};

struct Rollout {
  ppo::Trajectory agent;
  /// Same observations and length as `agent`, rewards negated.
  std::optional<ppo::Trajectory> adversary;
  /// Episode ended by failure (no bootstrap).
  bool terminal = false;
  /// Episode ended by failure or horizon, rather than by max_steps.
  bool finished = false;
};

/// Runs one episode of at most min(horizon, max_steps) steps. Each step the
/// agent samples a_t, the adversary (if any) samples its action from the same
/// observation, and the environment steps on combine_actions(a_t, adv, alpha).
/// The agent records r_t, the adversary -r_t. Truncated trajectories are
/// bootstrapped with each policy's own value function.
Rollout collect_rollout(const nn::ActorCritic& agent, const nn::ActorCritic* adversary, env::EnvId env_id,
                        const env::DynamicsParams& params, double alpha, int horizon, int max_steps,
                        RolloutStreams& streams, std::optional<int> adversary_index = std::nullopt);

}  // namespace rap::train
