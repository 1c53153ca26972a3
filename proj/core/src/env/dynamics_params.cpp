#include "rap/env/dynamics_params.hpp"

#include <cmath>
#include <nlohmann/json.hpp>

#include "rap/errors.hpp"

namespace rap::env {
namespace {

using nlohmann::json;

json record_json(const DynamicsParams& p) {
  json j;
  j["mass_scale"] = p.mass_scale;
  for (std::size_t i = 0; i < p.friction_scales.size(); ++i)
    j["friction_scale_" + std::to_string(i)] = p.friction_scales[i];
  return j;
}

DynamicsParams record_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("dynamics record must be an object");
  DynamicsParams p;
  std::size_t n_friction = 0;
  bool has_mass = false;
  for (const auto& [key, value] : j.items()) {
    if (key == "name") continue;
    if (!value.is_number()) throw ConfigError("dynamics record field '" + key + "' is not a number");
    if (key == "mass_scale") {
      has_mass = true;
      p.mass_scale = value.get<double>();
    } else if (key.rfind("friction_scale_", 0) == 0) {
      ++n_friction;
    } else {
      throw ConfigError("unknown dynamics record field '" + key + "'");
    }
  }
  if (!has_mass) throw ConfigError("dynamics record lacks mass_scale");
  for (std::size_t i = 0; i < n_friction; ++i) {
    const auto key = "friction_scale_" + std::to_string(i);
    if (!j.contains(key)) throw ConfigError("dynamics record lacks " + key);
    p.friction_scales.push_back(j.at(key).get<double>());
  }
  p.validate();
  return p;
}

}  // namespace

std::string_view to_string(EnvId id) {
  switch (id) {
    case EnvId::PointWindWalker:
      return "point_wind_walker";
    case EnvId::SwingPendulum:
      return "swing_pendulum";
  }
  return "unknown";
}

EnvId parse_env_id(std::string_view name) {
  if (name == "point_wind_walker") return EnvId::PointWindWalker;
  if (name == "swing_pendulum") return EnvId::SwingPendulum;
  throw ConfigError("unknown env_id '" + std::string(name) +
                    "' (expected point_wind_walker or swing_pendulum)");
}

int friction_components(EnvId id) { return id == EnvId::PointWindWalker ? 2 : 1; }

DynamicsParams DynamicsParams::nominal(EnvId id) { return uniform(id, 1.0, 1.0); }

DynamicsParams DynamicsParams::uniform(EnvId id, double mass_scale, double friction_scale) {
  return {mass_scale, std::vector<double>(static_cast<std::size_t>(friction_components(id)), friction_scale)};
}

void DynamicsParams::validate() const {
  if (!std::isfinite(mass_scale) || mass_scale <= 0.0)
    throw ConfigError("mass_scale must be finite and > 0, got " + std::to_string(mass_scale));
  if (friction_scales.empty()) throw ConfigError("friction_scales must not be empty");
  for (std::size_t i = 0; i < friction_scales.size(); ++i)
    if (!std::isfinite(friction_scales[i]) || friction_scales[i] <= 0.0)
      throw ConfigError("friction_scales[" + std::to_string(i) + "] must be finite and > 0");
}

void DynamicsParams::validate_for(EnvId id) const {
  validate();
  if (static_cast<int>(friction_scales.size()) != friction_components(id))
    throw ConfigError(std::string(to_string(id)) + " has " + std::to_string(friction_components(id)) +
                      " friction components, params carry " + std::to_string(friction_scales.size()));
}

DomainSpec DomainSpec::box(EnvId id, Interval mass, Interval friction) {
  return {mass, std::vector<Interval>(static_cast<std::size_t>(friction_components(id)), friction)};
}

void DomainSpec::validate() const {
  auto check = [](const Interval& iv, const std::string& what) {
    if (!std::isfinite(iv.lo) || !std::isfinite(iv.hi) || iv.lo <= 0.0 || iv.lo > iv.hi)
      throw ConfigError(what + " interval must satisfy 0 < lo <= hi");
  };
  check(mass, "mass");
  if (friction.empty()) throw ConfigError("domain spec needs at least one friction interval");
  for (std::size_t i = 0; i < friction.size(); ++i) check(friction[i], "friction[" + std::to_string(i) + "]");
}

DynamicsParams dr_sample(const DomainSpec& spec, Rng& rng) {
  auto draw = [&rng](const Interval& iv) {
    std::uniform_real_distribution<double> dist(iv.lo, iv.hi);
    const double v = dist(rng);
    return iv.lo == iv.hi ? iv.lo : v;
  };
  DynamicsParams p;
  p.mass_scale = draw(spec.mass);
  p.friction_scales.reserve(spec.friction.size());
  for (const auto& iv : spec.friction) p.friction_scales.push_back(draw(iv));
  return p;
}

std::vector<NamedParams> holdout_suite(EnvId id, double hi, double lo) {
  if (!(std::isfinite(hi) && std::isfinite(lo) && lo > 0.0 && hi > lo))
    throw ConfigError("holdout_suite requires hi > lo > 0");
  const int k = friction_components(id);
  std::vector<DynamicsParams> combos;
  if (k >= 2) {
    for (unsigned mask = 1; mask + 1 < (1u << k); ++mask) {
      DynamicsParams p{1.0, {}};
      for (int i = 0; i < k; ++i) p.friction_scales.push_back((mask >> i) & 1u ? hi : lo);
      combos.push_back(std::move(p));
    }
  } else {
    for (unsigned mask = 0; mask < 4; ++mask) {
      DynamicsParams p{(mask & 1u) ? hi : lo, std::vector<double>(static_cast<std::size_t>(k), (mask & 2u) ? hi : lo)};
      combos.push_back(std::move(p));
    }
  }
  std::vector<NamedParams> suite;
  for (std::size_t i = 0; i < combos.size(); ++i) {
    std::string name;
    for (std::size_t n = i + 1; n > 0; n = (n - 1) / 26) name.insert(name.begin(), static_cast<char>('A' + (n - 1) % 26));
    suite.push_back({std::move(name), std::move(combos[i])});
  }
  return suite;
}

std::string to_record(const DynamicsParams& params) { return record_json(params).dump(); }

DynamicsParams from_record(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("malformed dynamics record: ") + e.what());
  }
  return record_from_json(j);
}

std::string suite_to_text(const std::vector<NamedParams>& suite) {
  json arr = json::array();
  for (const auto& t : suite) {
    json j = record_json(t.params);
    j["name"] = t.name;
    arr.push_back(std::move(j));
  }
  return arr.dump(2);
}

std::vector<NamedParams> suite_from_text(std::string_view text) {
  json arr;
  try {
    arr = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("malformed holdout suite: ") + e.what());
  }
  if (!arr.is_array()) throw ConfigError("holdout suite must be an array");
  std::vector<NamedParams> suite;
  for (const auto& j : arr) {
    if (!j.contains("name") || !j.at("name").is_string()) throw ConfigError("holdout entry lacks a name");
    suite.push_back({j.at("name").get<std::string>(), record_from_json(j)});
  }
  return suite;
}

}  // namespace rap::env
