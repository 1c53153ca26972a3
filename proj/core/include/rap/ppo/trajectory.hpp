#pragma once

#include <optional>
#include <vector>

#include "rap/env/environment.hpp"

namespace rap::ppo {

struct Transition {
  env::Observation observation;
  std::vector<double> action;  // raw sampled action (pre-clip)
  double logp_old = 0.0;
  double value_old = 0.0;
  double reward = 0.0;
  bool done = false;
};

/// One policy's view of an episode. Agent and adversary trajectories of the
/// same rollout share observations and lengths.
struct Trajectory {
  std::vector<Transition> steps;
  /// 1-based adversary id that was active in this rollout, if any.
  std::optional<int> adversary_index;
  /// V(s_T) when the episode was cut by the horizon or batch budget; 0 when terminal.
  double bootstrap_value = 0.0;

  std::size_t size() const { return steps.size(); }
  double total_reward() const;
  /// Throws ProtocolError unless 1 <= size <= horizon, logp finite, and done only on the last step.
  void validate(int horizon) const;
};

}  // namespace rap::ppo
