#include "rap/ppo/ppo.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "rap/errors.hpp"
#include "rap/nn/gaussian.hpp"
#include "rap/nn/mlp.hpp"
#include "rap/ppo/gae.hpp"

namespace rap::ppo {

using nn::Matrix;
using nn::Tape;
using nn::Var;

void PPOConfig::validate() const {
  auto in_unit = [](double v, const char* name) {
    if (!(v >= 0.0 && v <= 1.0))
      throw ConfigError(std::string(name) + " must lie in [0, 1], got " + std::to_string(v));
  };
  in_unit(gamma, "gamma");
  in_unit(lambda, "lambda");
  if (!(clip > 0.0)) throw ConfigError("clip must be > 0");
  if (!(value_coeff >= 0.0)) throw ConfigError("value_coeff must be >= 0");
  if (!(entropy_coeff >= 0.0)) throw ConfigError("entropy_coeff must be >= 0");
  if (!(lr > 0.0)) throw ConfigError("lr must be > 0");
  if (minibatch_size < 1) throw ConfigError("minibatch_size must be >= 1");
  if (sgd_epochs < 1) throw ConfigError("sgd_epochs must be >= 1");
  if (train_batch_size < 1) throw ConfigError("train_batch_size must be >= 1");
}

Batch Batch::rows(std::span<const int> index) const {
  Batch b;
  const auto n = static_cast<Eigen::Index>(index.size());
  b.observations.resize(n, observations.cols());
  b.actions.resize(n, actions.cols());
  b.logp_old.resize(n, 1);
  b.advantages.resize(n, 1);
  b.returns.resize(n, 1);
  for (Eigen::Index i = 0; i < n; ++i) {
    const int r = index[static_cast<std::size_t>(i)];
    b.observations.row(i) = observations.row(r);
    b.actions.row(i) = actions.row(r);
    b.logp_old(i, 0) = logp_old(r, 0);
    b.advantages(i, 0) = advantages(r, 0);
    b.returns(i, 0) = returns(r, 0);
  }
  return b;
}

Batch build_batch(std::span<const Trajectory> trajectories, const PPOConfig& cfg) {
  std::size_t total = 0;
  for (const auto& t : trajectories) total += t.size();
  if (total == 0) throw ShapeError("build_batch: no transitions");
  const auto& first = trajectories.front().steps.front();
  const auto obs_dim = static_cast<Eigen::Index>(first.observation.size());
  const auto act_dim = static_cast<Eigen::Index>(first.action.size());

  Batch b;
  const auto n = static_cast<Eigen::Index>(total);
  b.observations.resize(n, obs_dim);
  b.actions.resize(n, act_dim);
  b.logp_old.resize(n, 1);
  b.advantages.resize(n, 1);
  b.returns.resize(n, 1);

  Eigen::Index row = 0;
  std::vector<double> rewards, values;
  for (const auto& traj : trajectories) {
    rewards.clear();
    values.clear();
    for (const auto& s : traj.steps) {
      rewards.push_back(s.reward);
      values.push_back(s.value_old);
    }
    const auto g = gae(rewards, values, traj.bootstrap_value, cfg.gamma, cfg.lambda);
    for (std::size_t t = 0; t < traj.steps.size(); ++t, ++row) {
      const auto& s = traj.steps[t];
      if (static_cast<Eigen::Index>(s.observation.size()) != obs_dim ||
          static_cast<Eigen::Index>(s.action.size()) != act_dim)
        throw ShapeError("build_batch: inconsistent observation/action sizes across transitions");
      for (Eigen::Index c = 0; c < obs_dim; ++c) b.observations(row, c) = s.observation[static_cast<std::size_t>(c)];
      for (Eigen::Index c = 0; c < act_dim; ++c) b.actions(row, c) = s.action[static_cast<std::size_t>(c)];
      b.logp_old(row, 0) = s.logp_old;
      b.advantages(row, 0) = g.advantages[t];
      b.returns(row, 0) = g.returns[t];
    }
  }

  const double mean = b.advantages.mean();
  const double var = (b.advantages.array() - mean).square().mean();
  b.advantages = ((b.advantages.array() - mean) / (std::sqrt(var) + 1e-8)).matrix();
  return b;
}

LossRecord ppo_loss(Tape& tape, const Batch& batch, const nn::ActorCritic& model, const PPOConfig& cfg) {
  if (batch.size() < 1) throw ShapeError("ppo_loss: empty batch");
  if (batch.observations.cols() != model.obs_dim() || batch.actions.cols() != model.action_dim())
    throw ShapeError("ppo_loss: batch dimensions do not match the model");
  LossRecord rec;
  rec.policy = nn::bind_parameters(tape, model.policy);
  rec.value = nn::bind_parameters(tape, model.value);

  Var obs = tape.constant(batch.observations);
  Var actions = tape.constant(batch.actions);
  Var logp_old = tape.constant(batch.logp_old);
  Var adv = tape.constant(batch.advantages);
  Var returns = tape.constant(batch.returns);

  Var mean = nn::mlp_forward(tape, rec.policy, obs);
  rec.logp_new = nn::gaussian_logp(tape, mean, rec.policy.log_std, actions);
  Var ratio = tape.exp(tape.sub(rec.logp_new, logp_old));
  for (Eigen::Index i = 0; i < tape.value(ratio).rows(); ++i)
    if (!std::isfinite(tape.value(ratio)(i, 0))) throw NumericError("ppo_loss: non-finite probability ratio");
  Var unclipped = tape.mul(ratio, adv);
  Var clipped = tape.mul(tape.clip(ratio, 1.0 - cfg.clip, 1.0 + cfg.clip), adv);
  rec.surrogate = tape.neg(tape.mean(tape.minimum(unclipped, clipped)));

  Var v = nn::mlp_forward(tape, rec.value, obs);
  rec.value_loss = tape.mean(tape.square(tape.sub(v, returns)));
  rec.entropy = nn::gaussian_entropy(tape, rec.policy.log_std);

  rec.loss = tape.add(tape.add(rec.surrogate, tape.scale(rec.value_loss, cfg.value_coeff)),
                      tape.scale(rec.entropy, -cfg.entropy_coeff));
  return rec;
}

namespace {

LossTerms read_terms(const Tape& tape, const LossRecord& rec) {
  return {tape.scalar_value(rec.loss), tape.scalar_value(rec.surrogate), tape.scalar_value(rec.value_loss),
          tape.scalar_value(rec.entropy)};
}

}  // namespace

LossTerms evaluate_loss(const Batch& batch, const nn::ActorCritic& model, const PPOConfig& cfg) {
  Tape tape;
  return read_terms(tape, ppo_loss(tape, batch, model, cfg));
}

LossGradient loss_gradient(const Batch& batch, const nn::ActorCritic& model, const PPOConfig& cfg) {
  Tape tape;
  auto rec = ppo_loss(tape, batch, model, cfg);
  tape.backward(rec.loss);
  return {read_terms(tape, rec), nn::collect_gradients(tape, rec.policy), nn::collect_gradients(tape, rec.value)};
}

ActorCriticOptimizer ActorCriticOptimizer::for_model(const nn::ActorCritic& model) {
  return {nn::OptimizerState::for_params(model.policy), nn::OptimizerState::for_params(model.value)};
}

UpdateStats ppo_update(nn::ActorCritic& model, ActorCriticOptimizer& optimizer,
                       std::span<const Trajectory> trajectories, const PPOConfig& cfg, Rng& shuffle_rng) {
  UpdateStats stats;
  std::size_t total = 0;
  for (const auto& t : trajectories) total += t.size();
  if (total == 0) {
    stats.skipped = true;
    stats.warning = "no trajectories; update skipped";
    return stats;
  }

  const Batch batch = build_batch(trajectories, cfg);
  stats.transitions = batch.size();

  const nn::ActorCritic backup_model = model;
  const ActorCriticOptimizer backup_opt = optimizer;
  const nn::AdamConfig adam{cfg.lr};

  std::vector<int> order(static_cast<std::size_t>(batch.size()));
  try {
    for (int epoch = 0; epoch < cfg.sgd_epochs; ++epoch) {
      std::iota(order.begin(), order.end(), 0);
      std::shuffle(order.begin(), order.end(), shuffle_rng);
      for (std::size_t start = 0; start < order.size(); start += static_cast<std::size_t>(cfg.minibatch_size)) {
        const std::size_t stop = std::min(order.size(), start + static_cast<std::size_t>(cfg.minibatch_size));
        const Batch mb = batch.rows(std::span<const int>(order).subspan(start, stop - start));
        const auto lg = loss_gradient(mb, model, cfg);
        nn::adam_step(model.policy, lg.policy, optimizer.policy, adam);
        nn::adam_step(model.value, lg.value, optimizer.value, adam);
        stats.mean_terms.loss += lg.terms.loss;
        stats.mean_terms.surrogate += lg.terms.surrogate;
        stats.mean_terms.value_loss += lg.terms.value_loss;
        stats.mean_terms.entropy += lg.terms.entropy;
        stats.mean_grad_norm += std::hypot(lg.policy.norm(), lg.value.norm());
        ++stats.minibatch_steps;
      }
    }
  } catch (const NumericError& e) {
    model = backup_model;
    optimizer = backup_opt;
    UpdateStats failed;
    failed.transitions = batch.size();
    failed.skipped = true;
    failed.warning = std::string("numeric failure, update skipped: ") + e.what();
    return failed;
  }

  const double steps = static_cast<double>(stats.minibatch_steps);
  stats.mean_terms.loss /= steps;
  stats.mean_terms.surrogate /= steps;
  stats.mean_terms.value_loss /= steps;
  stats.mean_terms.entropy /= steps;
  stats.mean_grad_norm /= steps;

  const Matrix means = nn::mlp_forward_batch(model.policy, batch.observations);
  double kl = 0.0;
  const auto d = static_cast<std::size_t>(model.action_dim());
  const std::span<const double> log_std(model.policy.log_std.data(), d);
  for (int i = 0; i < batch.size(); ++i) {
    const double logp = nn::gaussian_logp(std::span<const double>(means.row(i).data(), d), log_std,
                                          std::span<const double>(batch.actions.row(i).data(), d));
    kl += batch.logp_old(i, 0) - logp;
  }
  stats.kl = kl / batch.size();
  return stats;
}

}  // namespace rap::ppo
