#pragma once

#include <span>
#include <vector>

#include "rap/nn/parameters.hpp"
#include "rap/rng.hpp"

namespace rap::nn {

/// Gaussian policy network (with log_std) paired with its value network.
/// Used for the agent and for every adversary.
struct ActorCritic {
  ParameterSet policy;
  ParameterSet value;

  int obs_dim() const { return policy.input_dim(); }
  int action_dim() const { return policy.output_dim(); }
};

inline const std::vector<int> kDefaultHidden = {64, 64};

ActorCritic make_actor_critic(int obs_dim, int action_dim, std::span<const int> hidden, Rng& rng);

struct PolicyStep {
  Vector action;
  double logp = 0.0;
  double value = 0.0;
};

/// Samples an action and evaluates the value function at `obs`.
PolicyStep act(const ActorCritic& model, std::span<const double> obs, Rng& rng);

double state_value(const ActorCritic& model, std::span<const double> obs);

bool bit_identical(const ActorCritic& a, const ActorCritic& b);
std::uint64_t parameter_hash(const ActorCritic& model);

}  // namespace rap::nn
