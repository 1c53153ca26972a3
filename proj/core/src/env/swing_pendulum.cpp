#include "rap/env/swing_pendulum.hpp"

#include <cmath>
#include <numbers>

#include "rap/errors.hpp"

namespace rap::env {

double wrap_angle(double theta) {
  double w = std::remainder(theta, 2.0 * std::numbers::pi);
  if (w <= -std::numbers::pi) w += 2.0 * std::numbers::pi;
  return w;
}

SwingPendulum::SwingPendulum(SwingPendulumConfig cfg) : Environment(cfg.horizon), cfg_(cfg) {
  if (!(cfg.dt > 0.0 && cfg.base_mass > 0.0 && cfg.length > 0.0 && cfg.base_damping >= 0.0))
    throw ConfigError("SwingPendulum: dt, mass and length must be positive");
}

void SwingPendulum::reset_state(Rng& rng) {
  std::uniform_real_distribution<double> start(std::numbers::pi - 0.1, std::numbers::pi + 0.1);
  theta_ = wrap_angle(start(rng));
  omega_ = 0.0;
}

double SwingPendulum::advance(std::span<const double> action_total, std::span<const double> agent_action) {
  const auto& p = params();
  const double m = cfg_.base_mass * p.mass_scale;
  const double b = cfg_.base_damping * p.friction_scales[0];
  const double inertia = m * cfg_.length * cfg_.length;
  const double torque = m * cfg_.gravity * cfg_.length * std::sin(theta_) +
                        cfg_.max_torque * action_total[0] - b * omega_;
  omega_ += torque / inertia * cfg_.dt;
  theta_ = wrap_angle(theta_ + omega_ * cfg_.dt);
  const double u = agent_action[0];
  return -(theta_ * theta_ + 0.1 * omega_ * omega_ + 0.001 * u * u);
}

std::vector<double> SwingPendulum::observe() const {
  return {std::cos(theta_), std::sin(theta_), omega_};
}

}  // namespace rap::env
