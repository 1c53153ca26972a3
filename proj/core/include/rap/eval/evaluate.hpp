#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "rap/env/dynamics_params.hpp"
#include "rap/env/environment.hpp"
#include "rap/nn/policy.hpp"

namespace rap::eval {

inline constexpr int kDefaultEvalRollouts = 20;

/// Mean and (population) standard deviation of undiscounted episode returns.
struct EvalScore {
  double mean = 0.0;
  double std = 0.0;
  int n_rollouts = 0;

  static EvalScore from_returns(std::span<const double> returns);
};

/// Evaluation protocol shared by grids, holdout suites and sweeps.
struct EvalSpec {
  env::Interval mass_range{0.7, 1.3};
  env::Interval friction_range{0.7, 1.3};
  int grid_points = 5;
  double holdout_hi = 1.3;
  double holdout_lo = 0.7;
  int n_rollouts = kDefaultEvalRollouts;

  void validate() const;
};

/// Undiscounted returns of n_rollouts episodes. Rollout r uses streams derived
/// from (seed, r) only, so results do not depend on evaluation order. The
/// adversary, if given, acts through combine_actions with strength alpha.
std::vector<double> episode_returns(const nn::ActorCritic& agent, env::EnvId env_id,
                                    const env::DynamicsParams& params, int n_rollouts, std::uint64_t seed,
                                    int horizon = env::kDefaultHorizon, const nn::ActorCritic* adversary = nullptr,
                                    double alpha = 0.0);

/// Transfer evaluation against dynamics only (no adversary).
EvalScore evaluate(const nn::ActorCritic& agent, env::EnvId env_id, const env::DynamicsParams& params,
                   int n_rollouts, std::uint64_t seed, int horizon = env::kDefaultHorizon);

EvalScore evaluate_with_adversary(const nn::ActorCritic& agent, const nn::ActorCritic& adversary,
                                  env::EnvId env_id, const env::DynamicsParams& params, double alpha,
                                  int n_rollouts, std::uint64_t seed, int horizon = env::kDefaultHorizon);

}  // namespace rap::eval
