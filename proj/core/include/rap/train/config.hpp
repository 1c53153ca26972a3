#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "rap/env/dynamics_params.hpp"
#include "rap/env/environment.hpp"
#include "rap/nn/policy.hpp"
#include "rap/ppo/ppo.hpp"

namespace rap::train {

enum class Mode { Rap, SingleAdversary, Vanilla, DomainRandomization };

std::string_view to_string(Mode mode);
Mode parse_mode(std::string_view name);

struct TrainConfig {
  Mode mode = Mode::Vanilla;
  /// Population size. rap: >= 1; single_adversary: 1; vanilla and domain_randomization: 0.
  int n = 0;
  /// Adversary strength multiplier on the clipped adversary action.
  double alpha = 1.0;
  env::EnvId env_id = env::EnvId::PointWindWalker;
  /// Only used by domain_randomization; the others train on nominal dynamics.
  env::DomainSpec domain = env::DomainSpec::box(env::EnvId::PointWindWalker, {0.7, 1.3}, {0.7, 1.3});
  ppo::PPOConfig ppo;
  std::optional<ppo::PPOConfig> adversary_ppo;
  int horizon = env::kDefaultHorizon;
  int iterations = 150;
  int checkpoint_every = 25;
  std::vector<int> hidden = nn::kDefaultHidden;
  std::uint64_t seed = 0;

  /// Number of adversary policies this mode trains.
  int adversary_count() const;
  const ppo::PPOConfig& adversary_ppo_config() const { return adversary_ppo ? *adversary_ppo : ppo; }
  void validate() const;
};

}  // namespace rap::train
