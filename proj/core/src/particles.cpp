#include "darwin/particles.hpp"

#include <cmath>
#include <string>
#include <unordered_set>

#include "darwin/errors.hpp"

namespace darwin {

void InteractionParams::validate() const {
  if (!std::isfinite(softening) || softening < 0.0) {
    throw ValidationError("interaction.softening must be finite and >= 0");
  }
  if (!std::isfinite(c) || c <= 0.0) {
    throw ValidationError("interaction.c must be finite and > 0");
  }
  if (!std::isfinite(velocity_cap_fraction) || velocity_cap_fraction <= 0.0) {
    throw ValidationError("interaction.velocity_cap_fraction must be > 0");
  }
}

void validate_state(const SystemState& state, const InteractionParams& params) {
  params.validate();
  std::unordered_set<std::int64_t> ids;
  const double cap = params.velocity_cap_fraction * params.c;
  for (const auto& p : state.particles) {
    const std::string tag = "particle " + std::to_string(p.id);
    if (!ids.insert(p.id).second) {
      throw ValidationError("duplicate particle id " + std::to_string(p.id));
    }
    if (!std::isfinite(p.mass) || p.mass <= 0.0) {
      throw ValidationError(tag + ": mass must be > 0");
    }
    if (!std::isfinite(p.charge) || !p.position.allFinite() || !p.velocity.allFinite()) {
      throw ValidationError(tag + ": non-finite charge, position or velocity");
    }
    if (p.velocity.norm() > cap) {
      throw ValidationError(tag + ": |v| exceeds the velocity cap of " +
                            std::to_string(params.velocity_cap_fraction) + " c");
    }
  }
  if (params.softening == 0.0) {
    const auto& ps = state.particles;
    for (std::size_t a = 0; a < ps.size(); ++a) {
      for (std::size_t b = a + 1; b < ps.size(); ++b) {
        if (ps[a].position == ps[b].position) {
          throw CoincidentParticles("particles " + std::to_string(ps[a].id) + " and " +
                                    std::to_string(ps[b].id) +
                                    " coincide and softening is zero");
        }
      }
    }
  }
}

double max_speed_fraction(const SystemState& state, const InteractionParams& params) {
  double vmax = 0.0;
  for (const auto& p : state.particles) vmax = std::max(vmax, p.velocity.norm());
  return vmax / params.c;
}

Eigen::VectorXd stacked_positions(const SystemState& state) {
  Eigen::VectorXd out(3 * static_cast<Eigen::Index>(state.size()));
  for (std::size_t a = 0; a < state.size(); ++a) {
    out.segment<3>(3 * static_cast<Eigen::Index>(a)) = state.particles[a].position;
  }
  return out;
}

Eigen::VectorXd stacked_velocities(const SystemState& state) {
  Eigen::VectorXd out(3 * static_cast<Eigen::Index>(state.size()));
  for (std::size_t a = 0; a < state.size(); ++a) {
    out.segment<3>(3 * static_cast<Eigen::Index>(a)) = state.particles[a].velocity;
  }
  return out;
}

void set_positions(SystemState& state, const Eigen::VectorXd& positions) {
  for (std::size_t a = 0; a < state.size(); ++a) {
    state.particles[a].position = positions.segment<3>(3 * static_cast<Eigen::Index>(a));
  }
}

void set_velocities(SystemState& state, const Eigen::VectorXd& velocities) {
  for (std::size_t a = 0; a < state.size(); ++a) {
    state.particles[a].velocity = velocities.segment<3>(3 * static_cast<Eigen::Index>(a));
  }
}

}  // namespace darwin
