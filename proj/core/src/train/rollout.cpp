#include "rap/train/rollout.hpp"

#include <cmath>

#include "rap/env/environment.hpp"
#include "rap/env/perturbation.hpp"
#include "rap/errors.hpp"

namespace rap::train {

int sample_adversary(int n, Rng& rng) {
  if (n < 1) throw ConfigError("sample_adversary requires n >= 1");
  std::uniform_int_distribution<int> dist(1, n);
  return dist(rng);
}

RolloutStreams RolloutStreams::derive(std::uint64_t seed, std::uint64_t iteration, std::uint64_t rollout) {
  return {derive_stream(seed, "rollout-env", {iteration, rollout}),
          derive_stream(seed, "rollout-agent", {iteration, rollout}),
          derive_stream(seed, "rollout-adversary", {iteration, rollout})};
}

Rollout collect_rollout(const nn::ActorCritic& agent, const nn::ActorCritic* adversary, env::EnvId env_id,
                        const env::DynamicsParams& params, double alpha, int horizon, int max_steps,
                        RolloutStreams& streams, std::optional<int> adversary_index) {
  if (max_steps < 1) throw ConfigError("collect_rollout: max_steps must be >= 1");
  auto environment = env::make_environment(env_id, horizon);
  if (agent.obs_dim() != environment->obs_dim() || agent.action_dim() != environment->action_dim())
    throw ShapeError("collect_rollout: agent dimensions do not match " + std::string(env::to_string(env_id)));
  if (adversary && (adversary->obs_dim() != agent.obs_dim() || adversary->action_dim() != agent.action_dim()))
    throw ShapeError("collect_rollout: adversary dimensions do not match the agent");

  Rollout out;
  out.agent.adversary_index = adversary_index;
  if (adversary) {
    out.adversary.emplace();
    out.adversary->adversary_index = adversary_index;
  }

  env::Observation obs = environment->reset(params, streams.env);
  const int limit = std::min(horizon, max_steps);
  for (int t = 0; t < limit; ++t) {
    auto a = nn::act(agent, obs, streams.agent);
    const std::span<const double> a_span(a.action.data(), static_cast<std::size_t>(a.action.size()));
    const auto a_clipped = env::clip_agent_action(a_span);

    std::optional<nn::PolicyStep> adv;
    std::vector<double> total;
    if (adversary) {
      adv = nn::act(*adversary, obs, streams.adversary);
      total = env::combine_actions(
          a_span, std::span<const double>(adv->action.data(), static_cast<std::size_t>(adv->action.size())), alpha);
    } else {
      total = a_clipped;
    }

    auto result = environment->step(total, a_clipped);
    if (!std::isfinite(result.reward)) throw NumericError("collect_rollout: non-finite reward");

    out.agent.steps.push_back({obs, std::vector<double>(a.action.begin(), a.action.end()), a.logp, a.value,
                               result.reward, result.done});
    if (adversary)
      out.adversary->steps.push_back({obs, std::vector<double>(adv->action.begin(), adv->action.end()), adv->logp,
                                      adv->value, -result.reward, result.done});
    obs = std::move(result.observation);
    if (result.done) {
      out.finished = true;
      out.terminal = result.terminal;
      break;
    }
  }

  if (!out.terminal) {
    out.agent.bootstrap_value = nn::state_value(agent, obs);
    if (adversary) out.adversary->bootstrap_value = nn::state_value(*adversary, obs);
  }
  return out;
}

}  // namespace rap::train
