#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "darwin/dynamics.hpp"
#include "darwin/ensemble.hpp"
#include "darwin/field.hpp"
#include "darwin/particles.hpp"
#include "darwin/wire.hpp"

namespace darwin {

inline constexpr int kScenarioSchemaVersion = 1;

enum class UnitSystem { gaussian, si };

/// Grid on which the final state's charges are deposited for field analysis.
struct GridSpec {
  GridShape shape;
  std::optional<double> smearing;  // cm; 2h when unset

  bool operator==(const GridSpec&) const = default;
};

using ParticleBlock = std::variant<Particle, NeutralPlasmaSpec>;

/// A fully resolved scenario. Every quantity is in Gaussian units regardless
/// of the unit system the source file declared.
struct Scenario {
  std::vector<ParticleBlock> particles;
  InteractionParams interaction;
  IntegratorConfig integrator;
  /// When set, integrator.dt is chosen by suggest_time_step at run time
  /// with the given per-step energy-change target.
  bool auto_dt = false;
  double auto_dt_step_energy_change = kStepEnergyWarningThreshold;
  std::optional<WireSpec> wire;
  std::optional<GridSpec> grid;
  std::optional<std::uint64_t> seed;

  bool uses_random_ensemble() const;
  bool operator==(const Scenario&) const = default;
};

/// Parses scenario text. Throws SyntaxError (with line and column) for
/// malformed text and ValidationError naming the offending field otherwise.
Scenario parse_scenario(std::string_view text);
Scenario load_scenario(const std::string& path);

/// Canonical Gaussian-unit text. parse_scenario(serialize_scenario(s)) == s.
std::string serialize_scenario(const Scenario& scenario);

/// FNV-1a 64 of the canonical serialization, as 16 hex digits.
std::string scenario_hash(const Scenario& scenario);

/// Expands explicit particles and seeded ensembles, in block order.
SystemState initial_state(const Scenario& scenario);

}  // namespace darwin
