#include "rap/train/config.hpp"

#include <cmath>

#include "rap/errors.hpp"

namespace rap::train {

std::string_view to_string(Mode mode) {
  switch (mode) {
    case Mode::Rap:
      return "rap";
    case Mode::SingleAdversary:
      return "single_adversary";
    case Mode::Vanilla:
      return "vanilla";
    case Mode::DomainRandomization:
      return "domain_randomization";
  }
  return "unknown";
}

Mode parse_mode(std::string_view name) {
  if (name == "rap") return Mode::Rap;
  if (name == "single_adversary") return Mode::SingleAdversary;
  if (name == "vanilla") return Mode::Vanilla;
  if (name == "domain_randomization") return Mode::DomainRandomization;
  throw ConfigError("unknown mode '" + std::string(name) +
                    "' (expected rap, single_adversary, vanilla or domain_randomization)");
}

int TrainConfig::adversary_count() const {
  switch (mode) {
    case Mode::Rap:
      return n;
    case Mode::SingleAdversary:
      return 1;
    default:
      return 0;
  }
}

void TrainConfig::validate() const {
  if (n < 0) throw ConfigError("n must be >= 0, got " + std::to_string(n));
  switch (mode) {
    case Mode::Rap:
      if (n < 1) throw ConfigError("mode rap requires a population size n >= 1");
      break;
    case Mode::SingleAdversary:
      if (n != 1) throw ConfigError("mode single_adversary requires n = 1, got " + std::to_string(n));
      break;
    case Mode::Vanilla:
    case Mode::DomainRandomization:
      if (n != 0)
        throw ConfigError("mode " + std::string(to_string(mode)) + " trains no adversaries; n must be 0");
      break;
  }
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) throw ConfigError("alpha must be finite and >= 0");
  if (horizon < 1) throw ConfigError("horizon must be >= 1");
  if (iterations < 0) throw ConfigError("iterations must be >= 0");
  if (checkpoint_every < 1) throw ConfigError("checkpoint_every must be >= 1");
  for (int h : hidden)
    if (h < 1) throw ConfigError("hidden layer sizes must be >= 1");
  ppo.validate();
  if (adversary_ppo) adversary_ppo->validate();
  domain.validate();
  if (static_cast<int>(domain.friction.size()) != env::friction_components(env_id))
    throw ConfigError("domain friction intervals do not match the environment's friction components");
}

}  // namespace rap::train
