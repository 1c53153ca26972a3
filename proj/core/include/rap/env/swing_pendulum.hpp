#pragma once

#include "rap/env/environment.hpp"

namespace rap::env {

struct SwingPendulumConfig {
  double max_torque = 2.0;
  double base_mass = 1.0;
  double length = 1.0;
  double gravity = 9.81;
  double base_damping = 0.1;
  double dt = 0.05;
  int horizon = kDefaultHorizon;
};

/// Torque-driven pendulum, angle 0 upright, starting near the bottom.
///   I = m l^2,  alpha = (m g l sin(theta) + max_torque * u - b * omega) / I
///   reward = -(theta^2 + 0.1 omega^2 + 0.001 u_agent^2)
/// Observation o_t = (cos theta, sin theta, omega).
class SwingPendulum final : public Environment {
 public:
  explicit SwingPendulum(SwingPendulumConfig cfg = {});

  EnvId id() const override { return EnvId::SwingPendulum; }
  int observation_dim() const override { return 3; }
  int action_dim() const override { return 1; }
  /// (theta in (-pi, pi], omega)
  std::vector<double> state() const override { return {theta_, omega_}; }

  const SwingPendulumConfig& config() const { return cfg_; }

 protected:
  void reset_state(Rng& rng) override;
  double advance(std::span<const double> action_total, std::span<const double> agent_action) override;
  bool failed() const override { return false; }
  std::vector<double> observe() const override;

 private:
  SwingPendulumConfig cfg_;
  double theta_ = 0.0, omega_ = 0.0;
};

/// Wraps an angle into (-pi, pi].
double wrap_angle(double theta);

}  // namespace rap::env
