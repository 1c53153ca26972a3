#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "rap/rng.hpp"

namespace rap::env {

enum class EnvId { PointWindWalker, SwingPendulum };

std::string_view to_string(EnvId id);
/// Accepts "point_wind_walker" and "swing_pendulum"; ConfigError otherwise.
EnvId parse_env_id(std::string_view name);

/// Number of friction-bearing components (PointWindWalker: x/y drag; SwingPendulum: joint damping).
int friction_components(EnvId id);

/// One environment instance: body mass scale and one friction scale per component.
struct DynamicsParams {
  double mass_scale = 1.0;
  std::vector<double> friction_scales;

  static DynamicsParams nominal(EnvId id);
  /// Same friction scale on every component.
  static DynamicsParams uniform(EnvId id, double mass_scale, double friction_scale);

  /// ConfigError unless every entry is finite and strictly positive.
  void validate() const;
  /// validate() plus a friction component count check for `id`.
  void validate_for(EnvId id) const;

  bool operator==(const DynamicsParams&) const = default;
};

struct Interval {
  double lo = 1.0;
  double hi = 1.0;
  bool operator==(const Interval&) const = default;
};

/// Admissible box of dynamics parameters; sampled uniformly per rollout.
struct DomainSpec {
  Interval mass;
  std::vector<Interval> friction;

  /// Same friction interval for every component of `id`.
  static DomainSpec box(EnvId id, Interval mass, Interval friction);
  void validate() const;
};

/// Each field independently uniform over its interval.
DynamicsParams dr_sample(const DomainSpec& spec, Rng& rng);

struct NamedParams {
  std::string name;
  DynamicsParams params;
};

/// Hi/lo holdout assignments. With k >= 2 friction components: the 2^k - 2
/// mixed friction assignments (bit i of the mask set means component i is
/// hi), mass 1. With a single component: mass x friction over {lo, hi}
/// (bit 0 mass, bit 1 friction). Ordered by mask, named "A", "B", ...
std::vector<NamedParams> holdout_suite(EnvId id, double hi, double lo);

/// Flat JSON record: {"mass_scale": m, "friction_scale_0": f0, ...}.
std::string to_record(const DynamicsParams& params);
DynamicsParams from_record(std::string_view text);

/// JSON array of {"name": ..., <record fields>} in suite order.
std::string suite_to_text(const std::vector<NamedParams>& suite);
std::vector<NamedParams> suite_from_text(std::string_view text);

}  // namespace rap::env
