#pragma once

#include <string_view>

namespace darwin {

// Internal unit system is Gaussian CGS: cm, g, s, statcoulomb, statampere,
// erg. SI only appears at I/O boundaries through to_si / to_gaussian.

/// Electron-scale constants in Gaussian units plus the SI conversion factors.
/// `c` is a runtime value so callers can scale it toward the Coulomb limit;
/// the conversion factors stay tied to the physical definitions.
struct PhysicalConstants {
  double c;                    // cm/s
  double e_mag;                // statC
  double m_e;                  // g
  double statamp_per_ampere;   // also statC per coulomb
  double erg_per_mev;

  /// CODATA 2018 values.
  static PhysicalConstants codata2018();

  /// Copy with c multiplied by `factor`; conversion factors are unchanged.
  PhysicalConstants with_c_scale(double factor) const;
  /// Copy with the electron mass multiplied by `factor`.
  PhysicalConstants with_mass_scale(double factor) const;
  PhysicalConstants with_charge_scale(double factor) const;

  /// Throws ValidationError unless every field is finite and positive.
  void validate() const;

  /// m c^2 in erg.
  double rest_energy() const { return m_e * c * c; }
};

/// The same constants in SI, used as an independent route for cross-checks.
struct SiConstants {
  double c;          // m/s
  double e;          // C
  double m_e;        // kg
  double epsilon0;   // F/m, Gaussian-consistent value 1 / (4 pi 1e-7 c^2)

  static SiConstants codata2018();
};

enum class QuantityKind {
  charge,                 // C <-> statC
  current,                // A <-> statA
  energy,                 // J <-> erg
  length,                 // m <-> cm
  mass,                   // kg <-> g
  inductance_per_length,  // H/m <-> dimensionless
  velocity,               // m/s <-> cm/s
  time,                   // s <-> s
};

/// Parses "charge", "current", ..., "inductance-per-length". Throws
/// ValidationError on an unknown name.
QuantityKind parse_quantity_kind(std::string_view name);
std::string_view to_string(QuantityKind kind);

/// Gaussian units per SI unit for `kind`.
double gaussian_per_si(QuantityKind kind,
                       const PhysicalConstants& consts = PhysicalConstants::codata2018());

double to_gaussian(double si_value, QuantityKind kind,
                   const PhysicalConstants& consts = PhysicalConstants::codata2018());
double to_si(double gaussian_value, QuantityKind kind,
             const PhysicalConstants& consts = PhysicalConstants::codata2018());

inline double erg_to_mev(double erg, const PhysicalConstants& consts) {
  return erg / consts.erg_per_mev;
}
inline double mev_to_erg(double mev, const PhysicalConstants& consts) {
  return mev * consts.erg_per_mev;
}

/// Alfven current I0 = m c^3 / e, in statampere.
double alfven_current_gaussian(const PhysicalConstants& consts);

/// Alfven current I0 = m c^3 / e converted to ampere.
double alfven_current(const PhysicalConstants& consts = PhysicalConstants::codata2018());

/// I0 = 4 pi epsilon0 m c^3 / e evaluated entirely in SI, in ampere.
double alfven_current_si_route(const SiConstants& si = SiConstants::codata2018());

}  // namespace darwin
