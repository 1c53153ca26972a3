#include "rap/env/environment.hpp"

#include <cmath>

#include "rap/env/point_wind_walker.hpp"
#include "rap/env/swing_pendulum.hpp"
#include "rap/errors.hpp"

namespace rap::env {

Environment::Environment(int horizon) : horizon_(horizon) {
  if (horizon < 1) throw ConfigError("horizon must be >= 1");
}

Observation Environment::reset(const DynamicsParams& params, Rng& rng) {
  params.validate_for(id());
  params_ = params;
  steps_ = 0;
  done_ = false;
  active_ = true;
  prev_action_.assign(static_cast<std::size_t>(action_dim()), 0.0);
  reset_state(rng);
  return make_observation();
}

StepResult Environment::step(std::span<const double> action_total, std::span<const double> agent_action) {
  if (!active_) throw ProtocolError("step() called before reset()");
  if (done_) throw ProtocolError("step() called on a finished episode");
  const auto d = static_cast<std::size_t>(action_dim());
  if (action_total.size() != d || agent_action.size() != d)
    throw ShapeError("step: expected actions of length " + std::to_string(d));
  for (std::size_t i = 0; i < d; ++i)
    if (!std::isfinite(action_total[i]) || !std::isfinite(agent_action[i]))
      throw NumericError("step: non-finite action");

  StepResult out;
  out.reward = advance(action_total, agent_action);
  prev_action_.assign(agent_action.begin(), agent_action.end());
  ++steps_;
  out.terminal = failed();
  done_ = out.terminal || steps_ >= horizon_;
  out.done = done_;
  out.observation = make_observation();
  return out;
}

Observation Environment::make_observation() const {
  Observation o = observe();
  o.insert(o.end(), prev_action_.begin(), prev_action_.end());
  return o;
}

std::unique_ptr<Environment> make_environment(EnvId id, int horizon) {
  switch (id) {
    case EnvId::PointWindWalker: {
      PointWindWalkerConfig cfg;
      cfg.horizon = horizon;
      return std::make_unique<PointWindWalker>(cfg);
    }
    case EnvId::SwingPendulum: {
      SwingPendulumConfig cfg;
      cfg.horizon = horizon;
      return std::make_unique<SwingPendulum>(cfg);
    }
  }
  throw ConfigError("unknown environment id");
}

}  // namespace rap::env
