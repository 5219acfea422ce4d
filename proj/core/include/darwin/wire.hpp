#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "darwin/particles.hpp"
#include "darwin/units.hpp"

namespace darwin {

// Inductive bookkeeping for a thin straight current channel. A wire of
// length Lambda along the unit vector n with inductance L = eta * Lambda
// carries I = (1/Lambda) sum_a q_a n.v_a, and its magnetic energy
// L (I/c)^2 / 2 is added to the mechanical kinetic energy. These are pure
// evaluations; they can be applied to any state after the fact.

enum class EtaSource { supplied, thin_wire_model };

std::string_view to_string(EtaSource source);

struct WireSpec {
  double length = 0.0;  // Lambda, cm
  std::optional<double> radius;  // cm, only for the thin-wire model
  Vec3 direction = Vec3::UnitZ();
  double eta = 0.0;  // L / Lambda, dimensionless in Gaussian units
  EtaSource eta_source = EtaSource::supplied;

  static WireSpec with_eta(double length, const Vec3& direction, double eta);
  /// eta from thin_wire_eta(length, radius).
  static WireSpec thin_wire(double length, double radius, const Vec3& direction);

  double inductance() const { return eta * length; }
  void validate() const;
  bool operator==(const WireSpec&) const = default;
};

/// Self-inductance per unit length of a thin straight wire,
/// eta = 2 [ln(2 Lambda / a) - 1]. Requires 0 < a < Lambda / 10.
double thin_wire_eta(double length, double radius);

/// I = (1/Lambda) sum_a q_a n.v_a in statampere.
double wire_current(const SystemState& state, const WireSpec& wire);

/// Magnetic part L (I/c)^2 / 2 in erg.
double inductive_magnetic_energy(const SystemState& state, const WireSpec& wire,
                                 const PhysicalConstants& consts = PhysicalConstants::codata2018());

/// Same quantity evaluated as (L / 2 c^2 Lambda^2) sum_{a,b} q_a q_b (n.v_a)(n.v_b).
double inductive_magnetic_energy_pairwise(
    const SystemState& state, const WireSpec& wire,
    const PhysicalConstants& consts = PhysicalConstants::codata2018());

/// K_N = sum m v^2 / 2 + L (I/c)^2 / 2.
double inductive_kinetic_energy(const SystemState& state, const WireSpec& wire,
                                const PhysicalConstants& consts = PhysicalConstants::codata2018());

/// Change of K_N on destroying `particle` from a wire that carries the total
/// current `current` (statA, including the particle):
/// k = m|v|^2/2 + eta (q I / c)(n.v) / c.
double removal_energy(const Particle& particle, const WireSpec& wire, double current,
                      const PhysicalConstants& consts = PhysicalConstants::codata2018());

/// The Ampere cross term of removal_energy alone.
double removal_magnetic_term(const Particle& particle, const WireSpec& wire, double current,
                             const PhysicalConstants& consts = PhysicalConstants::codata2018());

/// W = -eta m c^2 (I / I0)(v / c) for an electron of speed v (cm/s) in a
/// channel carrying I (statA). Signed; linear in each argument.
double magnetic_enhancement(double eta, double current, double speed,
                            const PhysicalConstants& consts = PhysicalConstants::codata2018());

/// Effective carrier drift speed |I| Lambda / sum_a |q_a|, the speed every
/// carrier would need to reproduce the wire current. Zero for an uncharged
/// state.
double carrier_drift_speed(const SystemState& state, const WireSpec& wire);

/// Threshold (m_n - m_p - m_e) c^2 of p + e -> n + nu, CODATA 2018 masses.
inline constexpr double kInverseBetaThresholdMev = 0.78233341;

struct ThresholdComparison {
  bool above = false;  // available >= threshold
  double margin_mev = 0.0;
};

ThresholdComparison beta_threshold_check(
    double available_energy_erg, const PhysicalConstants& consts = PhysicalConstants::codata2018());

struct WireEnergyReport {
  double eta = 0.0;
  EtaSource eta_source = EtaSource::supplied;
  double current_statamp = 0.0;
  double current_ampere = 0.0;
  double current_ratio = 0.0;  // I / I0
  std::optional<double> inductive_energy_erg;  // L (I/c)^2 / 2
  std::vector<double> removal_energies_erg;
  double speed = 0.0;  // cm/s used in W
  double w_magnetic_erg = 0.0;
  double w_magnetic_mev = 0.0;
  ThresholdComparison threshold;
};

/// Report for particles in a wire; W uses carrier_drift_speed.
WireEnergyReport wire_energy_report(const SystemState& state, const WireSpec& wire,
                                    const PhysicalConstants& consts = PhysicalConstants::codata2018());

/// Report for a prescribed current (statA) and electron speed (cm/s), with
/// no particle list. The inductive energy is filled in when the wire length
/// is known.
WireEnergyReport wire_energy_report(const WireSpec& wire, double current, double speed,
                                    const PhysicalConstants& consts = PhysicalConstants::codata2018());

}  // namespace darwin
