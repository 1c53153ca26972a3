#include "rap/exp/experiment_config.hpp"

#include <openssl/evp.h>

#include <cstdlib>
#include <fstream>
#include <nlohmann/json.hpp>
#include <set>
#include <sstream>

#include "rap/errors.hpp"

namespace rap::exp {
namespace {

using nlohmann::json;

void reject_unknown(const json& obj, const std::string& prefix, const std::set<std::string>& allowed) {
  for (const auto& [key, value] : obj.items())
    if (!allowed.contains(key)) throw ConfigError("unknown config key '" + prefix + key + "'");
}

const json& require_object(const json& j, const std::string& name) {
  if (!j.is_object()) throw ConfigError("config section '" + name + "' must be an object");
  return j;
}

double get_number(const json& obj, const std::string& key, const std::string& path, double fallback) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_number()) throw ConfigError("config field '" + path + key + "' must be a number");
  return v.get<double>();
}

int get_int(const json& obj, const std::string& key, const std::string& path, int fallback) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_number_integer()) throw ConfigError("config field '" + path + key + "' must be an integer");
  return v.get<int>();
}

std::uint64_t get_seed(const json& v, const std::string& name) {
  if (!v.is_number_integer() || v.get<long long>() < 0)
    throw ConfigError("config field '" + name + "' must be a non-negative integer");
  return v.get<std::uint64_t>();
}

env::Interval get_interval(const json& obj, const std::string& key, const std::string& path, env::Interval fallback) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
    throw ConfigError("config field '" + path + key + "' must be a [lo, hi] pair");
  env::Interval iv{v[0].get<double>(), v[1].get<double>()};
  if (!(iv.lo > 0.0 && iv.lo <= iv.hi))
    throw ConfigError("config field '" + path + key + "' must satisfy 0 < lo <= hi");
  return iv;
}

ppo::PPOConfig parse_ppo(const json& j, const std::string& section, const ppo::PPOConfig& base) {
  require_object(j, section);
  const std::string p = section + ".";
  reject_unknown(j, p,
                 {"gamma", "lambda", "clip", "value_coeff", "entropy_coeff", "lr", "minibatch_size", "sgd_epochs",
                  "train_batch_size"});
  ppo::PPOConfig c = base;
  c.gamma = get_number(j, "gamma", p, c.gamma);
  c.lambda = get_number(j, "lambda", p, c.lambda);
  c.clip = get_number(j, "clip", p, c.clip);
  c.value_coeff = get_number(j, "value_coeff", p, c.value_coeff);
  c.entropy_coeff = get_number(j, "entropy_coeff", p, c.entropy_coeff);
  c.lr = get_number(j, "lr", p, c.lr);
  c.minibatch_size = get_int(j, "minibatch_size", p, c.minibatch_size);
  c.sgd_epochs = get_int(j, "sgd_epochs", p, c.sgd_epochs);
  c.train_batch_size = get_int(j, "train_batch_size", p, c.train_batch_size);
  try {
    c.validate();
  } catch (const ConfigError& e) {
    throw ConfigError(p + e.what());
  }
  return c;
}

json ppo_json(const ppo::PPOConfig& c) {
  return {{"gamma", c.gamma},
          {"lambda", c.lambda},
          {"clip", c.clip},
          {"value_coeff", c.value_coeff},
          {"entropy_coeff", c.entropy_coeff},
          {"lr", c.lr},
          {"minibatch_size", c.minibatch_size},
          {"sgd_epochs", c.sgd_epochs},
          {"train_batch_size", c.train_batch_size}};
}

json interval_json(env::Interval iv) { return json::array({iv.lo, iv.hi}); }

}  // namespace

void ExperimentConfig::validate() const {
  train.validate();
  eval.validate();
  if (seeds.empty()) throw ConfigError("seeds must not be empty");
}

ExperimentConfig parse_config(std::string_view json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  require_object(root, "<root>");
  reject_unknown(root, "",
                 {"mode", "env_id", "seed", "n", "alpha", "horizon", "iterations", "checkpoint_every", "hidden",
                  "seeds", "output_dir", "ppo", "adversary_ppo", "domain", "eval"});
  for (const char* required : {"mode", "env_id", "seed"})
    if (!root.contains(required)) throw ConfigError(std::string("missing required config field '") + required + "'");
  if (!root.at("mode").is_string()) throw ConfigError("config field 'mode' must be a string");
  if (!root.at("env_id").is_string()) throw ConfigError("config field 'env_id' must be a string");

  ExperimentConfig cfg;
  auto& t = cfg.train;
  t.mode = train::parse_mode(root.at("mode").get<std::string>());
  t.env_id = env::parse_env_id(root.at("env_id").get<std::string>());
  t.seed = get_seed(root.at("seed"), "seed");

  if (t.mode == train::Mode::Rap && !root.contains("n"))
    throw ConfigError("mode rap requires the population size 'n'");
  const int default_n = t.mode == train::Mode::SingleAdversary ? 1 : 0;
  t.n = get_int(root, "n", "", t.mode == train::Mode::Rap ? 1 : default_n);
  t.alpha = get_number(root, "alpha", "", t.alpha);
  t.horizon = get_int(root, "horizon", "", t.horizon);
  t.iterations = get_int(root, "iterations", "", t.iterations);
  t.checkpoint_every = get_int(root, "checkpoint_every", "", t.checkpoint_every);
  if (root.contains("hidden")) {
    const auto& h = root.at("hidden");
    if (!h.is_array() || h.empty()) throw ConfigError("config field 'hidden' must be a non-empty integer array");
    t.hidden.clear();
    for (const auto& v : h) {
      if (!v.is_number_integer()) throw ConfigError("config field 'hidden' must contain integers");
      t.hidden.push_back(v.get<int>());
    }
  }
  if (root.contains("ppo")) t.ppo = parse_ppo(root.at("ppo"), "ppo", t.ppo);
  if (root.contains("adversary_ppo")) t.adversary_ppo = parse_ppo(root.at("adversary_ppo"), "adversary_ppo", t.ppo);

  env::Interval dr_mass{0.7, 1.3}, dr_friction{0.7, 1.3};
  if (root.contains("domain")) {
    const auto& d = require_object(root.at("domain"), "domain");
    reject_unknown(d, "domain.", {"mass", "friction"});
    dr_mass = get_interval(d, "mass", "domain.", dr_mass);
    dr_friction = get_interval(d, "friction", "domain.", dr_friction);
  }
  t.domain = env::DomainSpec::box(t.env_id, dr_mass, dr_friction);

  if (root.contains("eval")) {
    const auto& e = require_object(root.at("eval"), "eval");
    reject_unknown(e, "eval.",
                   {"mass_range", "friction_range", "grid_points", "holdout_hi", "holdout_lo", "n_rollouts"});
    auto& ev = cfg.eval;
    ev.mass_range = get_interval(e, "mass_range", "eval.", ev.mass_range);
    ev.friction_range = get_interval(e, "friction_range", "eval.", ev.friction_range);
    ev.grid_points = get_int(e, "grid_points", "eval.", ev.grid_points);
    ev.holdout_hi = get_number(e, "holdout_hi", "eval.", ev.holdout_hi);
    ev.holdout_lo = get_number(e, "holdout_lo", "eval.", ev.holdout_lo);
    ev.n_rollouts = get_int(e, "n_rollouts", "eval.", ev.n_rollouts);
  }

  if (root.contains("seeds")) {
    const auto& s = root.at("seeds");
    if (!s.is_array() || s.empty()) throw ConfigError("config field 'seeds' must be a non-empty array");
    for (const auto& v : s) cfg.seeds.push_back(get_seed(v, "seeds"));
  } else {
    cfg.seeds = {t.seed, t.seed + 1, t.seed + 2};
  }
  if (root.contains("output_dir")) {
    if (!root.at("output_dir").is_string()) throw ConfigError("config field 'output_dir' must be a string");
    cfg.output_dir = root.at("output_dir").get<std::string>();
  }

  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string canonical_config(const ExperimentConfig& cfg) {
  const auto& t = cfg.train;
  json j;
  j["mode"] = std::string(train::to_string(t.mode));
  j["env_id"] = std::string(env::to_string(t.env_id));
  j["seed"] = t.seed;
  j["n"] = t.n;
  j["alpha"] = t.alpha;
  j["horizon"] = t.horizon;
  j["iterations"] = t.iterations;
  j["checkpoint_every"] = t.checkpoint_every;
  j["hidden"] = t.hidden;
  j["seeds"] = cfg.seeds;
  j["ppo"] = ppo_json(t.ppo);
  if (t.adversary_ppo) j["adversary_ppo"] = ppo_json(*t.adversary_ppo);
  j["domain"] = {{"mass", interval_json(t.domain.mass)}, {"friction", interval_json(t.domain.friction.front())}};
  j["eval"] = {{"mass_range", interval_json(cfg.eval.mass_range)},
               {"friction_range", interval_json(cfg.eval.friction_range)},
               {"grid_points", cfg.eval.grid_points},
               {"holdout_hi", cfg.eval.holdout_hi},
               {"holdout_lo", cfg.eval.holdout_lo},
               {"n_rollouts", cfg.eval.n_rollouts}};
  return j.dump();
}

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("SHA-256 digest failed");
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(kHex[digest[i] >> 4]);
    out.push_back(kHex[digest[i] & 0xf]);
  }
  return out;
}

std::string config_hash(const ExperimentConfig& cfg) { return sha256_hex(canonical_config(cfg)); }

std::filesystem::path resolve_output_dir(const ExperimentConfig& cfg) {
  const char* root = std::getenv("RAP_LAB_OUT");
  if (root && *root && cfg.output_dir.is_relative()) return std::filesystem::path(root) / cfg.output_dir;
  return cfg.output_dir;
}

}  // namespace rap::exp
