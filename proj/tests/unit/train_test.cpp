#include <gtest/gtest.h>

#include <map>
#include <set>

#include "rap/env/environment.hpp"
#include "rap/env/perturbation.hpp"
#include "rap/errors.hpp"
#include "rap/train/config.hpp"
#include "rap/train/population.hpp"
#include "rap/train/rollout.hpp"
#include "rap/train/trainer.hpp"
#include "test_support.hpp"

using namespace rap;
using namespace rap::train;

namespace {

TrainConfig quick(Mode mode, int n, std::uint64_t seed = 0) {
  TrainConfig cfg;
  cfg.mode = mode;
  cfg.n = n;
  cfg.seed = seed;
  cfg.hidden = {16};
  cfg.horizon = 50;
  cfg.iterations = 2;
  cfg.ppo.train_batch_size = 500;
  cfg.ppo.minibatch_size = 100;
  cfg.ppo.sgd_epochs = 2;
  return cfg;
}

bool same_trajectory(const ppo::Trajectory& a, const ppo::Trajectory& b) {
  if (a.size() != b.size() || a.bootstrap_value != b.bootstrap_value) return false;
  for (std::size_t t = 0; t < a.size(); ++t) {
    const auto &x = a.steps[t], &y = b.steps[t];
    if (x.observation != y.observation || x.action != y.action || x.logp_old != y.logp_old ||
        x.value_old != y.value_old || x.reward != y.reward || x.done != y.done)
      return false;
  }
  return true;
}

}  // namespace

TEST(Config, ModeRules) {
  EXPECT_NO_THROW(quick(Mode::Rap, 3).validate());
  EXPECT_THROW(quick(Mode::Rap, 0).validate(), ConfigError);
  EXPECT_THROW(quick(Mode::SingleAdversary, 2).validate(), ConfigError);
  EXPECT_THROW(quick(Mode::Vanilla, 1).validate(), ConfigError);
  EXPECT_EQ(quick(Mode::Rap, 4).adversary_count(), 4);
  EXPECT_EQ(quick(Mode::DomainRandomization, 0).adversary_count(), 0);
  EXPECT_EQ(parse_mode("single_adversary"), Mode::SingleAdversary);
  EXPECT_THROW(parse_mode("minimax"), ConfigError);
}

TEST(Population, VanillaHasNoAdversaries) {
  const auto s = init_population(quick(Mode::Vanilla, 0));
  EXPECT_TRUE(s.adversaries.empty());
  EXPECT_EQ(s.agent.obs_dim(), 5);
  EXPECT_EQ(s.agent.action_dim(), 2);
}

TEST(Population, SameSeedBitIdentical) {
  const auto a = init_population(quick(Mode::Rap, 3, 7));
  const auto b = init_population(quick(Mode::Rap, 3, 7));
  EXPECT_TRUE(nn::bit_identical(a.agent, b.agent));
  for (int i = 0; i < 3; ++i) EXPECT_TRUE(nn::bit_identical(a.adversaries[i], b.adversaries[i]));
}

TEST(Population, AdversariesPairwiseDistinct) {
  const auto s = init_population(quick(Mode::Rap, 3));
  std::set<std::uint64_t> hashes{nn::parameter_hash(s.agent)};
  for (const auto& adv : s.adversaries) {
    hashes.insert(nn::parameter_hash(adv));
    EXPECT_EQ(adv.action_dim(), s.agent.action_dim());
  }
  EXPECT_EQ(hashes.size(), 4u);
}

TEST(Population, NegativeSizeRejected) {
  auto cfg = quick(Mode::Rap, 1);
  cfg.n = -1;
  EXPECT_THROW(init_population(cfg), ConfigError);
}

TEST(SampleAdversary, SingleIsAlwaysOne) {
  auto rng = derive_stream(1, "select");
  for (int i = 0; i < 100; ++i) EXPECT_EQ(sample_adversary(1, rng), 1);
  EXPECT_THROW(sample_adversary(0, rng), ConfigError);
}

TEST(SampleAdversary, UniformCounts) {
  auto rng = derive_stream(2, "select");
  std::vector<int> counts(5, 0);
  for (int i = 0; i < 10000; ++i) ++counts[sample_adversary(5, rng) - 1];
  double chi2 = 0.0;
  for (int c : counts) {
    EXPECT_GE(c, 1800);
    EXPECT_LE(c, 2200);
    chi2 += (c - 2000.0) * (c - 2000.0) / 2000.0;
  }
  EXPECT_GT(rap::testing::chi_square_sf(chi2, 4), 1e-4);
}

TEST(SampleAdversary, SeededSequence) {
  auto a = derive_stream(3, "select");
  auto b = derive_stream(3, "select");
  for (int i = 0; i < 50; ++i) EXPECT_EQ(sample_adversary(7, a), sample_adversary(7, b));
}

TEST(SampleAdversary, IterationCountsPassChiSquareAcrossSeeds) {
  int failures = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    auto cfg = quick(Mode::Rap, 3, seed);
    cfg.horizon = 5;
    cfg.ppo.train_batch_size = 300;  // 60 rollouts
    cfg.ppo.sgd_epochs = 1;
    cfg.ppo.minibatch_size = 300;
    auto state = init_population(cfg);
    const auto stats = train_iteration(state, cfg);
    const double expected = stats.rollouts / 3.0;
    double chi2 = 0.0;
    for (int c : stats.adversary_rollouts) chi2 += (c - expected) * (c - expected) / expected;
    if (rap::testing::chi_square_sf(chi2, 2) <= 1e-4) ++failures;
  }
  EXPECT_EQ(failures, 0);
}

TEST(Rollout, AdversaryRewardIsExactNegation) {
  const auto s = init_population(quick(Mode::Rap, 1));
  for (std::uint64_t k = 0; k < 20; ++k) {
    auto streams = RolloutStreams::derive(0, 0, k);
    const auto r = collect_rollout(s.agent, &s.adversaries[0], env::EnvId::PointWindWalker,
                                   env::DynamicsParams::nominal(env::EnvId::PointWindWalker), 1.0, 200, 200,
                                   streams, 1);
    ASSERT_TRUE(r.adversary);
    ASSERT_EQ(r.adversary->size(), r.agent.size());
    EXPECT_LE(r.agent.size(), 200u);
    for (std::size_t t = 0; t < r.agent.size(); ++t) {
      EXPECT_EQ(r.adversary->steps[t].reward, -r.agent.steps[t].reward);
      EXPECT_EQ(r.adversary->steps[t].observation, r.agent.steps[t].observation);
      EXPECT_EQ(r.adversary->steps[t].done, r.agent.steps[t].done);
    }
    EXPECT_EQ(r.agent.adversary_index, 1);
  }
}

TEST(Rollout, NoAdversaryStepsOnClippedAgentAction) {
  const auto s = init_population(quick(Mode::Vanilla, 0));
  auto streams = RolloutStreams::derive(0, 0, 0);
  const auto params = env::DynamicsParams::nominal(env::EnvId::PointWindWalker);
  const auto r = collect_rollout(s.agent, nullptr, env::EnvId::PointWindWalker, params, 1.0, 30, 30, streams);
  EXPECT_FALSE(r.adversary);
  // Replay the stored actions through a fresh environment.
  auto e = env::make_environment(env::EnvId::PointWindWalker, 30);
  auto env_rng = derive_stream(0, "rollout-env", {0, 0});
  auto obs = e->reset(params, env_rng);
  for (const auto& step : r.agent.steps) {
    EXPECT_EQ(step.observation, obs);
    const auto res = e->step(env::clip_agent_action(step.action));
    EXPECT_EQ(res.reward, step.reward);
    obs = res.observation;
  }
}

TEST(Rollout, TruncatedRolloutBootstrapsFromFinalObservation) {
  const auto s = init_population(quick(Mode::Vanilla, 0));
  auto streams = RolloutStreams::derive(0, 0, 0);
  const auto params = env::DynamicsParams::nominal(env::EnvId::PointWindWalker);
  const auto cut = collect_rollout(s.agent, nullptr, env::EnvId::PointWindWalker, params, 1.0, 200, 7, streams);
  ASSERT_EQ(cut.agent.size(), 7u);
  EXPECT_FALSE(cut.finished);
  EXPECT_FALSE(cut.agent.steps.back().done);
  auto e = env::make_environment(env::EnvId::PointWindWalker);
  auto env_rng = derive_stream(0, "rollout-env", {0, 0});
  auto obs = e->reset(params, env_rng);
  for (const auto& step : cut.agent.steps) obs = e->step(env::clip_agent_action(step.action)).observation;
  EXPECT_EQ(cut.agent.bootstrap_value, nn::state_value(s.agent, obs));
}

TEST(Rollout, ToppledRolloutHasZeroBootstrap) {
  // A strong adversary pushing constantly sideways; search a few seeds for a topple.
  auto s = init_population(quick(Mode::Rap, 1));
  auto& adv = s.adversaries[0];
  for (auto& layer : adv.policy.layers) layer.weight.setZero();
  adv.policy.layers.back().bias << 0.0, 5.0;
  adv.policy.log_std.setConstant(-5.0);
  bool toppled = false;
  for (std::uint64_t k = 0; k < 50 && !toppled; ++k) {
    auto streams = RolloutStreams::derive(1, 0, k);
    const auto r = collect_rollout(s.agent, &adv, env::EnvId::PointWindWalker,
                                   env::DynamicsParams::nominal(env::EnvId::PointWindWalker), 4.0, 200, 200,
                                   streams, 1);
    if (r.terminal) {
      toppled = true;
      EXPECT_TRUE(r.finished);
      EXPECT_EQ(r.agent.bootstrap_value, 0.0);
      EXPECT_EQ(r.adversary->bootstrap_value, 0.0);
      EXPECT_LT(r.agent.size(), 200u);
    }
  }
  EXPECT_TRUE(toppled);
}

TEST(Train, ZeroIterationsReturnsInitialState) {
  auto cfg = quick(Mode::Rap, 2);
  cfg.iterations = 0;
  const auto result = rap::train::train(cfg);
  const auto init = init_population(cfg);
  EXPECT_TRUE(result.curve.empty());
  EXPECT_TRUE(nn::bit_identical(result.state.agent, init.agent));
  EXPECT_TRUE(nn::bit_identical(result.state.adversaries[1], init.adversaries[1]));
}

TEST(Train, StepBudgetIsExact) {
  for (int n : {1, 2, 5}) {
    auto cfg = quick(Mode::Rap, n);
    const auto result = rap::train::train(cfg);
    for (const auto& s : result.curve) EXPECT_EQ(s.env_steps, cfg.ppo.train_batch_size);
    EXPECT_EQ(result.state.env_steps, 2 * cfg.ppo.train_batch_size);
  }
}

TEST(Train, UnusedAdversaryUntouchedUsedOneChanged) {
  // Few rollouts per iteration so some adversary is likely to sit out.
  bool saw_idle = false;
  for (std::uint64_t seed = 0; seed < 20 && !saw_idle; ++seed) {
    auto cfg = quick(Mode::Rap, 3, seed);
    cfg.ppo.train_batch_size = 100;
    cfg.ppo.minibatch_size = 50;
    auto state = init_population(cfg);
    const auto before = state;
    const auto stats = train_iteration(state, cfg);
    for (int i = 0; i < 3; ++i) {
      if (stats.adversary_rollouts[i] == 0) {
        saw_idle = true;
        EXPECT_TRUE(nn::bit_identical(state.adversaries[i], before.adversaries[i]));
        EXPECT_TRUE(stats.adversary_updates[i].skipped);
      } else {
        EXPECT_FALSE(nn::bit_identical(state.adversaries[i], before.adversaries[i]));
      }
    }
  }
  EXPECT_TRUE(saw_idle);
}

TEST(Train, AdversaryUpdateDependsOnlyOnItsOwnRollouts) {
  auto cfg = quick(Mode::Rap, 3, 4);
  auto state = init_population(cfg);
  const auto before = state;
  train_iteration(state, cfg);

  // Re-collect the iteration's rollouts independently and replay each adversary's update alone.
  std::map<int, std::vector<ppo::Trajectory>> own;
  int collected = 0;
  for (std::uint64_t k = 0; collected < cfg.ppo.train_batch_size; ++k) {
    auto streams = RolloutStreams::derive(cfg.seed, 0, k);
    auto select = derive_stream(cfg.seed, "adversary-select", {0, k});
    const int i = sample_adversary(3, select);
    auto r = collect_rollout(before.agent, &before.adversaries[i - 1], cfg.env_id,
                             env::DynamicsParams::nominal(cfg.env_id), cfg.alpha, cfg.horizon,
                             cfg.ppo.train_batch_size - collected, streams, i);
    collected += static_cast<int>(r.agent.size());
    own[i].push_back(std::move(*r.adversary));
  }
  for (int i = 1; i <= 3; ++i) {
    auto model = before.adversaries[i - 1];
    auto opt = before.adversary_optimizers[i - 1];
    auto shuffle = derive_stream(cfg.seed, "shuffle", {0, static_cast<std::uint64_t>(i)});
    ppo::ppo_update(model, opt, own[i], cfg.ppo, shuffle);
    EXPECT_EQ(nn::parameter_hash(model), nn::parameter_hash(state.adversaries[i - 1])) << "adversary " << i;
  }
}

TEST(Train, RapWithOneAdversaryEqualsSingleAdversary) {
  const auto a = rap::train::train(quick(Mode::Rap, 1, 3));
  const auto b = rap::train::train(quick(Mode::SingleAdversary, 1, 3));
  EXPECT_TRUE(nn::bit_identical(a.state.agent, b.state.agent));
  EXPECT_TRUE(nn::bit_identical(a.state.adversaries[0], b.state.adversaries[0]));
}

TEST(Train, RapWithZeroAlphaEqualsVanillaForAgent) {
  auto rap = quick(Mode::Rap, 2, 5);
  rap.alpha = 0.0;
  const auto a = rap::train::train(rap);
  const auto b = rap::train::train(quick(Mode::Vanilla, 0, 5));
  EXPECT_TRUE(nn::bit_identical(a.state.agent, b.state.agent));
  for (std::size_t i = 0; i < a.curve.size(); ++i) EXPECT_EQ(a.curve[i].mean_return, b.curve[i].mean_return);
}

TEST(Train, DomainRandomizationChangesTheRun) {
  const auto dr = rap::train::train(quick(Mode::DomainRandomization, 0, 6));
  const auto vanilla = rap::train::train(quick(Mode::Vanilla, 0, 6));
  EXPECT_FALSE(nn::bit_identical(dr.state.agent, vanilla.state.agent));
}

TEST(Train, DeterministicCheckpoints) {
  rap::testing::TempDir d1("train_a"), d2("train_b");
  auto cfg = quick(Mode::Rap, 2, 8);
  TrainOptions o1, o2;
  o1.checkpoint_dir = d1.path();
  o2.checkpoint_dir = d2.path();
  const auto a = rap::train::train(cfg, o1);
  const auto b = rap::train::train(cfg, o2);
  ASSERT_EQ(a.checkpoints.size(), 3u);
  for (std::size_t i = 0; i < a.checkpoints.size(); ++i)
    EXPECT_EQ(rap::testing::slurp(a.checkpoints[i]), rap::testing::slurp(b.checkpoints[i]));
  const auto loaded = load_population(d1.path());
  EXPECT_TRUE(nn::bit_identical(loaded.agent, a.state.agent));
  ASSERT_EQ(loaded.adversaries.size(), 2u);
  EXPECT_TRUE(nn::bit_identical(loaded.adversaries[1], a.state.adversaries[1]));
}

TEST(Train, CurveCsvHasPerAdversaryCounts) {
  const auto result = rap::train::train(quick(Mode::Rap, 2));
  const auto csv = curve_csv(result.curve, 2);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "iteration,mean_return,std_return,rollouts,env_steps,J_1,J_2");
}
