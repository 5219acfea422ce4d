#include "darwin/units.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "darwin/errors.hpp"

namespace darwin {

namespace {

constexpr double kSpeedOfLightSi = 299792458.0;          // m/s, exact
constexpr double kElementaryChargeSi = 1.602176634e-19;  // C, exact
constexpr double kElectronMassSi = 9.1093837015e-31;     // kg

// Gaussian values written out independently of the SI ones above.
constexpr double kSpeedOfLightCgs = 2.99792458e10;          // cm/s
constexpr double kElementaryChargeCgs = 4.803204712570263e-10;  // statC
constexpr double kElectronMassCgs = 9.1093837015e-28;       // g

constexpr double kStatcoulombPerCoulomb = 2.99792458e9;  // 10 c in cgs convention
constexpr double kErgPerMev = 1.602176634e-6;

}  // namespace

PhysicalConstants PhysicalConstants::codata2018() {
  return PhysicalConstants{kSpeedOfLightCgs, kElementaryChargeCgs, kElectronMassCgs,
                           kStatcoulombPerCoulomb, kErgPerMev};
}

PhysicalConstants PhysicalConstants::with_c_scale(double factor) const {
  PhysicalConstants out = *this;
  out.c *= factor;
  out.validate();
  return out;
}

PhysicalConstants PhysicalConstants::with_mass_scale(double factor) const {
  PhysicalConstants out = *this;
  out.m_e *= factor;
  out.validate();
  return out;
}

PhysicalConstants PhysicalConstants::with_charge_scale(double factor) const {
  PhysicalConstants out = *this;
  out.e_mag *= factor;
  out.validate();
  return out;
}

void PhysicalConstants::validate() const {
  auto check = [](double v, const char* name) {
    if (!std::isfinite(v) || v <= 0.0) {
      throw ValidationError(std::string("physical constant '") + name +
                            "' must be finite and positive");
    }
  };
  check(c, "c");
  check(e_mag, "e_mag");
  check(m_e, "m_e");
  check(statamp_per_ampere, "statamp_per_ampere");
  check(erg_per_mev, "erg_per_mev");
}

SiConstants SiConstants::codata2018() {
  const double mu0 = 4.0e-7 * std::numbers::pi;
  return SiConstants{kSpeedOfLightSi, kElementaryChargeSi, kElectronMassSi,
                     1.0 / (mu0 * kSpeedOfLightSi * kSpeedOfLightSi)};
}

QuantityKind parse_quantity_kind(std::string_view name) {
  if (name == "charge") return QuantityKind::charge;
  if (name == "current") return QuantityKind::current;
  if (name == "energy") return QuantityKind::energy;
  if (name == "length") return QuantityKind::length;
  if (name == "mass") return QuantityKind::mass;
  if (name == "inductance-per-length") return QuantityKind::inductance_per_length;
  if (name == "velocity") return QuantityKind::velocity;
  if (name == "time") return QuantityKind::time;
  throw ValidationError("unknown quantity kind '" + std::string(name) + "'");
}

std::string_view to_string(QuantityKind kind) {
  switch (kind) {
    case QuantityKind::charge: return "charge";
    case QuantityKind::current: return "current";
    case QuantityKind::energy: return "energy";
    case QuantityKind::length: return "length";
    case QuantityKind::mass: return "mass";
    case QuantityKind::inductance_per_length: return "inductance-per-length";
    case QuantityKind::velocity: return "velocity";
    case QuantityKind::time: return "time";
  }
  return "unknown";
}

double gaussian_per_si(QuantityKind kind, const PhysicalConstants& consts) {
  switch (kind) {
    case QuantityKind::charge:
    case QuantityKind::current:
      return consts.statamp_per_ampere;
    case QuantityKind::energy:
      return 1.0e7;
    case QuantityKind::length:
    case QuantityKind::velocity:
      return 1.0e2;
    case QuantityKind::mass:
      return 1.0e3;
    case QuantityKind::inductance_per_length:
      // 1 H = 1e9 cm (abhenry), divided by 1 m = 100 cm.
      return 1.0e7;
    case QuantityKind::time:
      return 1.0;
  }
  throw ValidationError("unknown quantity kind");
}

double to_gaussian(double si_value, QuantityKind kind, const PhysicalConstants& consts) {
  return si_value * gaussian_per_si(kind, consts);
}

double to_si(double gaussian_value, QuantityKind kind, const PhysicalConstants& consts) {
  return gaussian_value / gaussian_per_si(kind, consts);
}

double alfven_current_gaussian(const PhysicalConstants& consts) {
  return consts.m_e * consts.c * consts.c * consts.c / consts.e_mag;
}

double alfven_current(const PhysicalConstants& consts) {
  return alfven_current_gaussian(consts) / consts.statamp_per_ampere;
}

double alfven_current_si_route(const SiConstants& si) {
  const double four_pi_eps0 = 4.0 * std::numbers::pi * si.epsilon0;
  return four_pi_eps0 * si.m_e * si.c * si.c * si.c / si.e;
}

}  // namespace darwin
