#include "rap/ppo/trajectory.hpp"

#include <cmath>

#include "rap/errors.hpp"

namespace rap::ppo {

double Trajectory::total_reward() const {
  double sum = 0.0;
  for (const auto& s : steps) sum += s.reward;
  return sum;
}

void Trajectory::validate(int horizon) const {
  if (steps.empty()) throw ProtocolError("trajectory is empty");
  if (static_cast<int>(steps.size()) > horizon)
    throw ProtocolError("trajectory of length " + std::to_string(steps.size()) + " exceeds horizon " +
                        std::to_string(horizon));
  for (std::size_t t = 0; t < steps.size(); ++t) {
    if (!std::isfinite(steps[t].logp_old)) throw ProtocolError("trajectory has non-finite logp_old");
    if (steps[t].done && t + 1 != steps.size()) throw ProtocolError("done flag set before the last step");
  }
}

}  // namespace rap::ppo
