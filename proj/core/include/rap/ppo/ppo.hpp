#pragma once

#include <span>
#include <string>
#include <vector>

#include "rap/nn/adam.hpp"
#include "rap/nn/policy.hpp"
#include "rap/nn/tape.hpp"
#include "rap/ppo/trajectory.hpp"
#include "rap/rng.hpp"

namespace rap::ppo {

struct PPOConfig {
  double gamma = 0.995;
  double lambda = 0.95;
  double clip = 0.3;
  double value_coeff = 1.0;
  double entropy_coeff = 0.0;
  double lr = 3e-4;
  int minibatch_size = 256;
  int sgd_epochs = 10;
  int train_batch_size = 4000;

  /// ConfigError naming the offending field.
  void validate() const;
};

/// Flattened training batch; column vectors are (batch x 1).
struct Batch {
  nn::Matrix observations;
  nn::Matrix actions;
  nn::Matrix logp_old;
  nn::Matrix advantages;
  nn::Matrix returns;

  int size() const { return static_cast<int>(observations.rows()); }
  Batch rows(std::span<const int> index) const;
};

/// Runs GAE per trajectory, flattens, and normalizes advantages over the
/// whole batch (mean 0, std 1, eps 1e-8).
Batch build_batch(std::span<const Trajectory> trajectories, const PPOConfig& cfg);

struct LossRecord {
  nn::Var loss;
  nn::Var surrogate;   // -mean(min(rho A, clip(rho) A))
  nn::Var value_loss;  // mean((V - R)^2)
  nn::Var entropy;
  nn::Var logp_new;    // batch x 1
  nn::ParameterBinding policy;
  nn::ParameterBinding value;
};

/// loss = surrogate + value_coeff * value_loss - entropy_coeff * entropy,
/// rho = exp(logp_new - logp_old). Advantages must already be normalized.
LossRecord ppo_loss(nn::Tape& tape, const Batch& batch, const nn::ActorCritic& model,
                    const PPOConfig& cfg);

struct LossTerms {
  double loss = 0.0;
  double surrogate = 0.0;
  double value_loss = 0.0;
  double entropy = 0.0;
};

struct LossGradient {
  LossTerms terms;
  nn::GradientSet policy;
  nn::GradientSet value;
};

LossTerms evaluate_loss(const Batch& batch, const nn::ActorCritic& model, const PPOConfig& cfg);
LossGradient loss_gradient(const Batch& batch, const nn::ActorCritic& model, const PPOConfig& cfg);

struct ActorCriticOptimizer {
  nn::OptimizerState policy;
  nn::OptimizerState value;

  static ActorCriticOptimizer for_model(const nn::ActorCritic& model);
};

struct UpdateStats {
  int transitions = 0;
  int minibatch_steps = 0;
  LossTerms mean_terms;
  double mean_grad_norm = 0.0;
  double kl = 0.0;  // mean(logp_old - logp_new) after the update
  bool skipped = false;
  std::string warning;
};

/// sgd_epochs passes over shuffled minibatches with Adam. An empty
/// trajectory list is a no-op (skipped, with a warning). A non-finite
/// gradient restores the prior model and optimizer state and reports skipped.
UpdateStats ppo_update(nn::ActorCritic& model, ActorCriticOptimizer& optimizer,
                       std::span<const Trajectory> trajectories, const PPOConfig& cfg, Rng& shuffle_rng);

}  // namespace rap::ppo
