#pragma once

#include <memory>
#include <span>
#include <vector>

#include "rap/env/dynamics_params.hpp"
#include "rap/rng.hpp"

namespace rap::env {

inline constexpr int kDefaultHorizon = 200;

/// [o_t, a_{t-1}]: environment observation followed by the agent's previous (clipped) action.
using Observation = std::vector<double>;

struct StepResult {
  Observation observation;
  double reward = 0.0;
  bool done = false;
  /// True when the episode ended by failure rather than the horizon (no bootstrap).
  bool terminal = false;
};

/// Continuous-control environment integrated with semi-implicit Euler
/// (velocity first, then position from the new velocity).
class Environment {
 public:
  virtual ~Environment() = default;

  virtual EnvId id() const = 0;
  /// Length of o_t.
  virtual int observation_dim() const = 0;
  virtual int action_dim() const = 0;
  /// Raw physical state, for inspection and tests.
  virtual std::vector<double> state() const = 0;

  /// Length of the agent-visible observation [o_t, a_{t-1}].
  int obs_dim() const { return observation_dim() + action_dim(); }
  int horizon() const { return horizon_; }
  int step_count() const { return steps_; }
  bool done() const { return done_; }
  const DynamicsParams& params() const { return params_; }

  Observation reset(const DynamicsParams& params, Rng& rng);

  /// Advances one step on `action_total` (already combined and clipped by the
  /// caller). `agent_action` is the agent's own clipped action, used for the
  /// control penalty and the previous-action slot. ProtocolError after done.
  StepResult step(std::span<const double> action_total, std::span<const double> agent_action);
  StepResult step(std::span<const double> action) { return step(action, action); }

 protected:
  explicit Environment(int horizon);

  virtual void reset_state(Rng& rng) = 0;
  /// Integrates one step and returns the reward.
  virtual double advance(std::span<const double> action_total, std::span<const double> agent_action) = 0;
  virtual bool failed() const = 0;
  virtual std::vector<double> observe() const = 0;

 private:
  Observation make_observation() const;

  int horizon_;
  int steps_ = 0;
  bool done_ = true;
  bool active_ = false;
  DynamicsParams params_;
  std::vector<double> prev_action_;
};

std::unique_ptr<Environment> make_environment(EnvId id, int horizon = kDefaultHorizon);

}  // namespace rap::env
