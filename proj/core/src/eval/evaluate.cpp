#include "rap/eval/evaluate.hpp"

#include <cmath>
#include <numeric>

#include "rap/errors.hpp"
#include "rap/train/rollout.hpp"

namespace rap::eval {

EvalScore EvalScore::from_returns(std::span<const double> returns) {
  if (returns.empty()) throw ConfigError("EvalScore needs at least one rollout");
  EvalScore s;
  s.n_rollouts = static_cast<int>(returns.size());
  s.mean = std::accumulate(returns.begin(), returns.end(), 0.0) / static_cast<double>(returns.size());
  double sq = 0.0;
  for (double r : returns) sq += (r - s.mean) * (r - s.mean);
  s.std = std::sqrt(sq / static_cast<double>(returns.size()));
  return s;
}

void EvalSpec::validate() const {
  env::DomainSpec{mass_range, {friction_range}}.validate();
  if (grid_points < 2) throw ConfigError("eval.grid_points must be >= 2");
  if (!(holdout_hi > holdout_lo && holdout_lo > 0.0)) throw ConfigError("eval.holdout_hi must exceed eval.holdout_lo > 0");
  if (n_rollouts < 1) throw ConfigError("eval.n_rollouts must be >= 1");
}

std::vector<double> episode_returns(const nn::ActorCritic& agent, env::EnvId env_id,
                                    const env::DynamicsParams& params, int n_rollouts, std::uint64_t seed,
                                    int horizon, const nn::ActorCritic* adversary, double alpha) {
  if (n_rollouts < 1) throw ConfigError("n_rollouts must be >= 1");
  std::vector<double> returns;
  returns.reserve(static_cast<std::size_t>(n_rollouts));
  for (int r = 0; r < n_rollouts; ++r) {
    auto streams = train::RolloutStreams::derive(seed, 0, static_cast<std::uint64_t>(r));
    const auto rollout =
        train::collect_rollout(agent, adversary, env_id, params, alpha, horizon, horizon, streams);
    returns.push_back(rollout.agent.total_reward());
  }
  return returns;
}

EvalScore evaluate(const nn::ActorCritic& agent, env::EnvId env_id, const env::DynamicsParams& params,
                   int n_rollouts, std::uint64_t seed, int horizon) {
  return EvalScore::from_returns(episode_returns(agent, env_id, params, n_rollouts, seed, horizon));
}

EvalScore evaluate_with_adversary(const nn::ActorCritic& agent, const nn::ActorCritic& adversary,
                                  env::EnvId env_id, const env::DynamicsParams& params, double alpha,
                                  int n_rollouts, std::uint64_t seed, int horizon) {
  return EvalScore::from_returns(
      episode_returns(agent, env_id, params, n_rollouts, seed, horizon, &adversary, alpha));
}

}  // namespace rap::eval
