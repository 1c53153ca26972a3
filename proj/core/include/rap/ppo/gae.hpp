#pragma once

#include <span>
#include <vector>

namespace rap::ppo {

struct GaeResult {
  std::vector<double> advantages;
  std::vector<double> returns;
};

/// Generalized advantage estimation by the backward recursion
///   delta_t = r_t + gamma V_{t+1} - V_t   (V_T = bootstrap)
///   A_t = delta_t + gamma lambda A_{t+1},  returns_t = A_t + V_t.
/// Advantages are left unnormalized.
GaeResult gae(std::span<const double> rewards, std::span<const double> values, double bootstrap,
              double gamma, double lambda);

}  // namespace rap::ppo
