#include "rap/env/point_wind_walker.hpp"

#include <cmath>

#include "rap/errors.hpp"

namespace rap::env {

PointWindWalker::PointWindWalker(PointWindWalkerConfig cfg) : Environment(cfg.horizon), cfg_(cfg) {
  if (!(cfg.dt > 0.0 && cfg.base_mass > 0.0 && cfg.base_drag >= 0.0 && cfg.max_force > 0.0))
    throw ConfigError("PointWindWalker: dt, mass and force must be positive");
}

void PointWindWalker::reset_state(Rng& rng) {
  std::uniform_real_distribution<double> noise(-cfg_.reset_noise, cfg_.reset_noise);
  x_ = noise(rng);
  y_ = noise(rng);
  vx_ = 0.0;
  vy_ = 0.0;
}

double PointWindWalker::advance(std::span<const double> action_total, std::span<const double> agent_action) {
  const auto& p = params();
  const double m = cfg_.base_mass * p.mass_scale;
  const double bx = cfg_.base_drag * p.friction_scales[0];
  const double by = cfg_.base_drag * p.friction_scales[1];
  const double ax = (cfg_.max_force * action_total[0] - bx * vx_) / m;
  const double ay = (cfg_.max_force * action_total[1] - by * vy_) / m;
  vx_ += ax * cfg_.dt;
  vy_ += ay * cfg_.dt;
  x_ += vx_ * cfg_.dt;
  y_ += vy_ * cfg_.dt;
  const double effort = agent_action[0] * agent_action[0] + agent_action[1] * agent_action[1];
  return vx_ - cfg_.control_cost * effort;
}

bool PointWindWalker::failed() const { return std::abs(y_) > cfg_.topple_y; }

}  // namespace rap::env
