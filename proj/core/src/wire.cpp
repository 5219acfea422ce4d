#include "darwin/wire.hpp"

#include <cassert>
#include <cmath>
#include <string>

#include "darwin/errors.hpp"

namespace darwin {

std::string_view to_string(EtaSource source) {
  switch (source) {
    case EtaSource::supplied: return "supplied";
    case EtaSource::thin_wire_model: return "thin-wire-model";
  }
  return "unknown";
}

WireSpec WireSpec::with_eta(double length, const Vec3& direction, double eta) {
  WireSpec w;
  w.length = length;
  w.direction = direction;
  w.eta = eta;
  w.eta_source = EtaSource::supplied;
  w.validate();
  return w;
}

WireSpec WireSpec::thin_wire(double length, double radius, const Vec3& direction) {
  WireSpec w;
  w.length = length;
  w.radius = radius;
  w.direction = direction;
  w.eta = thin_wire_eta(length, radius);
  w.eta_source = EtaSource::thin_wire_model;
  w.validate();
  return w;
}

void WireSpec::validate() const {
  if (!std::isfinite(length) || length <= 0.0) {
    throw ValidationError("wire.length must be > 0");
  }
  if (!direction.allFinite() || std::abs(direction.norm() - 1.0) > 1e-12) {
    throw ValidationError("wire.direction must be a unit vector (|n| = 1 to 1e-12)");
  }
  if (!std::isfinite(eta) || eta <= 0.0) {
    throw ValidationError("wire.eta must be > 0");
  }
  if (radius && !(*radius > 0.0 && *radius < length)) {
    throw ValidationError("wire.radius must satisfy 0 < a < length");
  }
}

double thin_wire_eta(double length, double radius) {
  if (!(length > 0.0) || !(radius > 0.0) || !(radius < length / 10.0)) {
    throw ThinWireAssumptionViolated("thin-wire inductance needs 0 < a < length / 10 (got length=" +
                                     std::to_string(length) + ", a=" + std::to_string(radius) +
                                     ")");
  }
  const double log_term = std::log(2.0 * length / radius);
  if (log_term <= 1.0) {
    throw ThinWireAssumptionViolated("thin-wire inductance is non-positive for ln(2 length / a) <= 1");
  }
  return 2.0 * (log_term - 1.0);
}

double wire_current(const SystemState& state, const WireSpec& wire) {
  double sum = 0.0;
  for (const auto& p : state.particles) sum += p.charge * wire.direction.dot(p.velocity);
  return sum / wire.length;
}

double inductive_magnetic_energy(const SystemState& state, const WireSpec& wire,
                                 const PhysicalConstants& consts) {
  const double i_over_c = wire_current(state, wire) / consts.c;
  return 0.5 * wire.inductance() * i_over_c * i_over_c;
}

double inductive_magnetic_energy_pairwise(const SystemState& state, const WireSpec& wire,
                                          const PhysicalConstants& consts) {
  const auto& ps = state.particles;
  double sum = 0.0;
  for (const auto& a : ps) {
    for (const auto& b : ps) {
      sum += a.charge * b.charge * wire.direction.dot(a.velocity) * wire.direction.dot(b.velocity);
    }
  }
  return wire.inductance() / (2.0 * consts.c * consts.c * wire.length * wire.length) * sum;
}

double inductive_kinetic_energy(const SystemState& state, const WireSpec& wire,
                                const PhysicalConstants& consts) {
  double mechanical = 0.0;
  for (const auto& p : state.particles) mechanical += 0.5 * p.mass * p.velocity.squaredNorm();
  const double magnetic = inductive_magnetic_energy(state, wire, consts);
  assert(std::abs(magnetic - inductive_magnetic_energy_pairwise(state, wire, consts)) <=
         1e-10 * std::max(magnetic, 1e-300));
  return mechanical + magnetic;
}

double removal_magnetic_term(const Particle& particle, const WireSpec& wire, double current,
                             const PhysicalConstants& consts) {
  return wire.eta * (particle.charge * current / consts.c) * wire.direction.dot(particle.velocity) /
         consts.c;
}

double removal_energy(const Particle& particle, const WireSpec& wire, double current,
                      const PhysicalConstants& consts) {
  return 0.5 * particle.mass * particle.velocity.squaredNorm() +
         removal_magnetic_term(particle, wire, current, consts);
}

double magnetic_enhancement(double eta, double current, double speed,
                            const PhysicalConstants& consts) {
  return -eta * consts.rest_energy() * (current / alfven_current_gaussian(consts)) *
         (speed / consts.c);
}

double carrier_drift_speed(const SystemState& state, const WireSpec& wire) {
  double carriers = 0.0;
  for (const auto& p : state.particles) carriers += std::abs(p.charge);
  if (carriers == 0.0) return 0.0;
  return std::abs(wire_current(state, wire)) * wire.length / carriers;
}

ThresholdComparison beta_threshold_check(double available_energy_erg,
                                         const PhysicalConstants& consts) {
  const double threshold_erg = mev_to_erg(kInverseBetaThresholdMev, consts);
  const double margin_erg = available_energy_erg - threshold_erg;
  return ThresholdComparison{margin_erg >= 0.0, erg_to_mev(margin_erg, consts)};
}

namespace {

WireEnergyReport base_report(const WireSpec& wire, double current, double speed,
                             const PhysicalConstants& consts) {
  WireEnergyReport r;
  r.eta = wire.eta;
  r.eta_source = wire.eta_source;
  r.current_statamp = current;
  r.current_ampere = current / consts.statamp_per_ampere;
  r.current_ratio = current / alfven_current_gaussian(consts);
  r.speed = speed;
  r.w_magnetic_erg = magnetic_enhancement(wire.eta, current, speed, consts);
  r.w_magnetic_mev = erg_to_mev(r.w_magnetic_erg, consts);
  r.threshold = beta_threshold_check(std::abs(r.w_magnetic_erg), consts);
  return r;
}

}  // namespace

WireEnergyReport wire_energy_report(const SystemState& state, const WireSpec& wire,
                                    const PhysicalConstants& consts) {
  wire.validate();
  const double current = wire_current(state, wire);
  WireEnergyReport r = base_report(wire, current, carrier_drift_speed(state, wire), consts);
  r.inductive_energy_erg = inductive_magnetic_energy(state, wire, consts);
  r.removal_energies_erg.reserve(state.size());
  for (const auto& p : state.particles) {
    r.removal_energies_erg.push_back(removal_energy(p, wire, current, consts));
  }
  return r;
}

WireEnergyReport wire_energy_report(const WireSpec& wire, double current, double speed,
                                    const PhysicalConstants& consts) {
  wire.validate();
  if (!(speed >= 0.0)) throw ValidationError("speed must be >= 0");
  WireEnergyReport r = base_report(wire, current, speed, consts);
  const double i_over_c = current / consts.c;
  r.inductive_energy_erg = 0.5 * wire.inductance() * i_over_c * i_over_c;
  // A single electron drifting along n at the given speed.
  Particle electron;
  electron.charge = -consts.e_mag;
  electron.mass = consts.m_e;
  electron.velocity = speed * wire.direction;
  r.removal_energies_erg.push_back(removal_energy(electron, wire, current, consts));
  return r;
}

}  // namespace darwin
