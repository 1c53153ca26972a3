#include "rap/train/trainer.hpp"

#include <cmath>
#include <numeric>
#include <optional>

#include "rap/csv.hpp"
#include "rap/errors.hpp"
#include "rap/nn/checkpoint.hpp"
#include "rap/train/rollout.hpp"

namespace rap::train {
namespace {

std::pair<double, double> mean_std(const std::vector<double>& xs) {
  if (xs.empty()) return {0.0, 0.0};
  const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
  double sq = 0.0;
  for (double x : xs) sq += (x - mean) * (x - mean);
  return {mean, std::sqrt(sq / static_cast<double>(xs.size()))};
}

}  // namespace

IterationStats train_iteration(PopulationState& state, const TrainConfig& cfg) {
  const int n = cfg.adversary_count();
  if (static_cast<int>(state.adversaries.size()) != n)
    throw ConfigError("population holds " + std::to_string(state.adversaries.size()) +
                      " adversaries but the config expects " + std::to_string(n));
  const auto it = static_cast<std::uint64_t>(state.iterations_done);
  const int budget = cfg.ppo.train_batch_size;
  const auto nominal = env::DynamicsParams::nominal(cfg.env_id);

  std::vector<ppo::Trajectory> agent_trajs;
  std::vector<std::vector<ppo::Trajectory>> adv_trajs(static_cast<std::size_t>(n));
  std::vector<std::vector<double>> adv_returns(static_cast<std::size_t>(n));
  std::vector<double> finished_returns, all_returns;
  std::vector<int> counts(static_cast<std::size_t>(n), 0);

  int collected = 0;
  for (std::uint64_t k = 0; collected < budget; ++k) {
    auto streams = RolloutStreams::derive(cfg.seed, it, k);
    env::DynamicsParams params = nominal;
    if (cfg.mode == Mode::DomainRandomization) {
      auto dr_rng = derive_stream(cfg.seed, "rollout-dr", {it, k});
      params = env::dr_sample(cfg.domain, dr_rng);
    }
    std::optional<int> index;
    const nn::ActorCritic* adversary = nullptr;
    if (n > 0) {
      auto select_rng = derive_stream(cfg.seed, "adversary-select", {it, k});
      index = sample_adversary(n, select_rng);
      adversary = &state.adversaries[static_cast<std::size_t>(*index - 1)];
    }
    auto rollout = collect_rollout(state.agent, adversary, cfg.env_id, params, cfg.alpha, cfg.horizon,
                                   budget - collected, streams, index);
    collected += static_cast<int>(rollout.agent.size());
    const double ret = rollout.agent.total_reward();
    all_returns.push_back(ret);
    if (rollout.finished) finished_returns.push_back(ret);
    if (index) {
      const auto slot = static_cast<std::size_t>(*index - 1);
      ++counts[slot];
      adv_returns[slot].push_back(-ret);
      adv_trajs[slot].push_back(std::move(*rollout.adversary));
    }
    agent_trajs.push_back(std::move(rollout.agent));
  }

  IterationStats stats;
  stats.iteration = state.iterations_done;
  std::tie(stats.mean_return, stats.std_return) = mean_std(finished_returns.empty() ? all_returns : finished_returns);
  stats.rollouts = static_cast<int>(agent_trajs.size());
  stats.adversary_rollouts = counts;
  stats.env_steps = collected;

  // Barrier phase: agent first, then adversaries in index order.
  auto agent_shuffle = derive_stream(cfg.seed, "shuffle", {it, 0});
  stats.agent_update = ppo::ppo_update(state.agent, state.agent_optimizer, agent_trajs, cfg.ppo, agent_shuffle);
  for (int i = 1; i <= n; ++i) {
    const auto slot = static_cast<std::size_t>(i - 1);
    stats.adversary_mean_return.push_back(mean_std(adv_returns[slot]).first);
    if (adv_trajs[slot].empty()) {
      ppo::UpdateStats none;
      none.skipped = true;
      none.warning = "adversary played no rollouts; update skipped";
      stats.adversary_updates.push_back(none);
      continue;
    }
    auto shuffle = derive_stream(cfg.seed, "shuffle", {it, static_cast<std::uint64_t>(i)});
    stats.adversary_updates.push_back(ppo::ppo_update(state.adversaries[slot], state.adversary_optimizers[slot],
                                                      adv_trajs[slot], cfg.adversary_ppo_config(), shuffle));
  }

  state.rollout_counts = counts;
  state.env_steps += collected;
  ++state.iterations_done;
  return stats;
}

TrainResult train(const TrainConfig& cfg, const TrainOptions& options) {
  cfg.validate();
  TrainResult result;
  result.state = init_population(cfg);
  for (int i = 0; i < cfg.iterations; ++i) {
    result.curve.push_back(train_iteration(result.state, cfg));
    if (options.on_iteration) options.on_iteration(result.curve.back());
    if (!options.checkpoint_dir.empty() && (i + 1) % cfg.checkpoint_every == 0)
      result.checkpoints = save_population(result.state, cfg, options.checkpoint_dir);
  }
  if (!options.checkpoint_dir.empty()) result.checkpoints = save_population(result.state, cfg, options.checkpoint_dir);
  return result;
}

std::vector<std::filesystem::path> save_population(const PopulationState& state, const TrainConfig& cfg,
                                                   const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create checkpoint directory " + dir.string() + ": " + ec.message());
  std::vector<std::filesystem::path> paths;
  paths.push_back(dir / "agent.ckpt");
  nn::save_checkpoint(paths.back(), state.agent, cfg.seed);
  for (std::size_t i = 0; i < state.adversaries.size(); ++i) {
    paths.push_back(dir / ("adversary_" + std::to_string(i + 1) + ".ckpt"));
    nn::save_checkpoint(paths.back(), state.adversaries[i], cfg.seed);
  }
  return paths;
}

LoadedPopulation load_population(const std::filesystem::path& dir) {
  LoadedPopulation pop;
  pop.agent = nn::load_checkpoint(dir / "agent.ckpt").model;
  for (int i = 1;; ++i) {
    const auto path = dir / ("adversary_" + std::to_string(i) + ".ckpt");
    if (!std::filesystem::exists(path)) break;
    pop.adversaries.push_back(nn::load_checkpoint(path).model);
  }
  return pop;
}

std::string curve_csv(const std::vector<IterationStats>& curve, int n_adversaries) {
  std::vector<std::string> header{"iteration", "mean_return", "std_return", "rollouts", "env_steps"};
  for (int i = 1; i <= n_adversaries; ++i) header.push_back("J_" + std::to_string(i));
  std::string out = join_csv(header) + "\n";
  for (const auto& s : curve) {
    std::vector<std::string> row{std::to_string(s.iteration), format_double(s.mean_return),
                                 format_double(s.std_return), std::to_string(s.rollouts),
                                 std::to_string(s.env_steps)};
    for (int j : s.adversary_rollouts) row.push_back(std::to_string(j));
    out += join_csv(row) + "\n";
  }
  return out;
}

std::string train_log_csv(const std::vector<IterationStats>& curve) {
  std::string out =
      "iteration,policy,mean_reward,loss,surrogate,value_loss,entropy,kl,grad_norm,transitions,skipped\n";
  auto row = [&out](int it, const std::string& policy, double reward, const ppo::UpdateStats& u) {
    out += join_csv({std::to_string(it), policy, format_double(reward), format_double(u.mean_terms.loss),
                     format_double(u.mean_terms.surrogate), format_double(u.mean_terms.value_loss),
                     format_double(u.mean_terms.entropy), format_double(u.kl), format_double(u.mean_grad_norm),
                     std::to_string(u.transitions), u.skipped ? "1" : "0"}) +
           "\n";
  };
  for (const auto& s : curve) {
    row(s.iteration, "agent", s.mean_return, s.agent_update);
    for (std::size_t i = 0; i < s.adversary_updates.size(); ++i)
      row(s.iteration, "adversary_" + std::to_string(i + 1), s.adversary_mean_return[i], s.adversary_updates[i]);
  }
  return out;
}

}  // namespace rap::train
