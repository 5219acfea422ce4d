#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

#include "darwin/units.hpp"

namespace darwin {

using Vec3 = Eigen::Vector3d;

/// One classical point charge in Gaussian units.
struct Particle {
  std::int64_t id = 0;
  double charge = 0.0;  // statC, signed; an electron carries -e
  double mass = 0.0;    // g
  Vec3 position = Vec3::Zero();  // cm
  Vec3 velocity = Vec3::Zero();  // cm/s

  bool operator==(const Particle&) const = default;
};

struct SystemState {
  std::vector<Particle> particles;
  double time = 0.0;  // s

  std::size_t size() const { return particles.size(); }
  bool operator==(const SystemState&) const = default;
};

/// Interaction and execution knobs shared by every pairwise evaluation.
struct InteractionParams {
  double softening = 0.0;  // Plummer length, cm
  double c = PhysicalConstants::codata2018().c;
  /// Hard cap on |v| as a fraction of c.
  double velocity_cap_fraction = 0.5;
  /// When false the velocity-velocity (Ampere) coupling is dropped and only
  /// the Coulomb interaction remains.
  bool ampere_coupling = true;
  /// Worker threads for pairwise assembly. Results are bit-identical for any
  /// value because every row is reduced in a fixed order.
  unsigned threads = 1;

  void validate() const;
  bool operator==(const InteractionParams&) const = default;
};

/// Checks ids, masses, the velocity cap and (for zero softening) that no two
/// particles coincide. Throws ValidationError / CoincidentParticles.
void validate_state(const SystemState& state, const InteractionParams& params);

/// Largest |v_a| / c over the state; zero for an empty state.
double max_speed_fraction(const SystemState& state, const InteractionParams& params);

Eigen::VectorXd stacked_positions(const SystemState& state);
Eigen::VectorXd stacked_velocities(const SystemState& state);
void set_positions(SystemState& state, const Eigen::VectorXd& positions);
void set_velocities(SystemState& state, const Eigen::VectorXd& velocities);

}  // namespace darwin
