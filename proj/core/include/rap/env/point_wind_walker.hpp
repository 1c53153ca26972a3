#pragma once

#include "rap/env/environment.hpp"

namespace rap::env {

struct PointWindWalkerConfig {
  double max_force = 1.0;
  double base_mass = 1.0;
  double base_drag = 0.5;
  double dt = 0.05;
  double topple_y = 1.0;
  double control_cost = 0.01;
  double reset_noise = 0.01;
  int horizon = kDefaultHorizon;
};

/// Planar point mass that is rewarded for eastward velocity. Lateral drift
/// beyond |y| > topple_y ends the episode.
///   accel = (max_force * a_total - b .* v) / m,  m = m0 * mass_scale, b_i = b0 * friction_i
///   reward = vx - control_cost * |a_agent|^2
/// Observation o_t = (y, vx, vy); x is omitted since nothing depends on it.
class PointWindWalker final : public Environment {
 public:
  explicit PointWindWalker(PointWindWalkerConfig cfg = {});

  EnvId id() const override { return EnvId::PointWindWalker; }
  int observation_dim() const override { return 3; }
  int action_dim() const override { return 2; }
  /// (x, y, vx, vy)
  std::vector<double> state() const override { return {x_, y_, vx_, vy_}; }

  const PointWindWalkerConfig& config() const { return cfg_; }

 protected:
  void reset_state(Rng& rng) override;
  double advance(std::span<const double> action_total, std::span<const double> agent_action) override;
  bool failed() const override;
  std::vector<double> observe() const override { return {y_, vx_, vy_}; }

 private:
  PointWindWalkerConfig cfg_;
  double x_ = 0.0, y_ = 0.0, vx_ = 0.0, vy_ = 0.0;
};

}  // namespace rap::env
