#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

#include "darwin/particles.hpp"

namespace darwin {

/// Identifier written into run provenance. Any reimplementation that draws
/// with the same algorithm reproduces the same ensembles.
inline constexpr std::string_view kRandomAlgorithm = "mt19937_64/u53-rejection-v1";

// One seeded std::mt19937_64 feeds every random draw of a scenario. Uniform
// doubles are formed from the top 53 bits of each output (not through
// std::uniform_real_distribution, whose algorithm is implementation-defined).
class EnsembleRng {
 public:
  explicit EnsembleRng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  /// Uniform on [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Uniform inside the unit ball by rejection from the enclosing cube.
  Vec3 in_unit_ball();

 private:
  std::mt19937_64 engine_;
};

/// Charge-neutral random plasma: `count` particles alternating +q, -q,
/// positions uniform in a cube of side `box` centered on `center` with a
/// minimum pairwise separation, velocities uniform in the ball of radius
/// `max_speed`.
struct NeutralPlasmaSpec {
  std::size_t count = 0;      // even
  double charge = 0.0;        // |q|, statC
  double mass = 0.0;          // g (both signs when mass_negative == 0)
  double mass_negative = 0.0; // g for the -q particles; 0 means same as mass
  double box = 0.0;           // cm
  Vec3 center = Vec3::Zero();
  double min_separation = 0.0;  // cm
  double max_speed = 0.0;       // cm/s

  void validate() const;
  bool operator==(const NeutralPlasmaSpec&) const = default;
};

/// Appends the ensemble to `out`, assigning ids first_id, first_id + 1, ...
void generate_neutral_plasma(const NeutralPlasmaSpec& spec, EnsembleRng& rng,
                             std::int64_t first_id, std::vector<Particle>& out);

}  // namespace darwin
