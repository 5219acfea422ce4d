#include "darwin/lagrangian.hpp"

#include <cmath>
#include <string>

#include "darwin/errors.hpp"
#include "parallel.hpp"

namespace darwin {

namespace {

struct PairGeometry {
  Vec3 r;          // r_a - r_b
  double s2;       // |r|^2 + eps^2
  double inv_s;    // 1 / s
};

PairGeometry pair_geometry(const Particle& a, const Particle& b, double softening) {
  PairGeometry g;
  g.r = a.position - b.position;
  g.s2 = g.r.squaredNorm() + softening * softening;
  if (!(g.s2 > 0.0)) {
    throw CoincidentParticles("particles " + std::to_string(a.id) + " and " +
                              std::to_string(b.id) + " coincide and softening is zero");
  }
  g.inv_s = 1.0 / std::sqrt(g.s2);
  return g;
}

double ampere_prefactor(const Particle& a, const Particle& b, const InteractionParams& params) {
  return a.charge * b.charge / (2.0 * params.c * params.c);
}

double pair_ampere_energy(const Particle& a, const Particle& b, const PairGeometry& g,
                          const InteractionParams& params) {
  const double k = ampere_prefactor(a, b, params);
  const double ra = g.r.dot(a.velocity);
  const double rb = g.r.dot(b.velocity);
  return k * g.inv_s * (a.velocity.dot(b.velocity) + ra * rb / g.s2);
}

// dL/dr_a contributed by the pair (a, b); dL/dr_b is its negative.
Vec3 pair_gradient(const Particle& a, const Particle& b, const InteractionParams& params) {
  const PairGeometry g = pair_geometry(a, b, params.softening);
  const double inv_s3 = g.inv_s / g.s2;
  Vec3 grad = (a.charge * b.charge * inv_s3) * g.r;
  if (params.ampere_coupling) {
    const double k = ampere_prefactor(a, b, params);
    const double ra = g.r.dot(a.velocity);
    const double rb = g.r.dot(b.velocity);
    const double vv = a.velocity.dot(b.velocity);
    // d/dr [vv/s + ra rb / s^3]
    grad += k * inv_s3 *
            ((-vv - 3.0 * ra * rb / g.s2) * g.r + rb * a.velocity + ra * b.velocity);
  }
  return grad;
}

// (q_a q_b / 2c^2 s)(I + r r^T / s^2), identical for (a, b) and (b, a).
Eigen::Matrix3d pair_coupling_block(const Particle& a, const Particle& b,
                                    const InteractionParams& params) {
  const PairGeometry g = pair_geometry(a, b, params.softening);
  const double k = ampere_prefactor(a, b, params) * g.inv_s;
  // Scale after forming r r^T; Eigen would otherwise fold the scalar into one
  // factor and the block would lose exact symmetry.
  Eigen::Matrix3d block = g.r * g.r.transpose();
  block *= k / g.s2;
  block.diagonal().array() += k;
  return block;
}

}  // namespace

double coulomb_energy(const SystemState& state, const InteractionParams& params) {
  const auto& ps = state.particles;
  double u = 0.0;
  for (std::size_t a = 0; a < ps.size(); ++a) {
    for (std::size_t b = a + 1; b < ps.size(); ++b) {
      const PairGeometry g = pair_geometry(ps[a], ps[b], params.softening);
      u += ps[a].charge * ps[b].charge * g.inv_s;
    }
  }
  return u;
}

double ampere_kinetic_energy(const SystemState& state, const InteractionParams& params) {
  if (!params.ampere_coupling) return 0.0;
  const auto& ps = state.particles;
  double k = 0.0;
  for (std::size_t a = 0; a < ps.size(); ++a) {
    for (std::size_t b = a + 1; b < ps.size(); ++b) {
      const PairGeometry g = pair_geometry(ps[a], ps[b], params.softening);
      k += pair_ampere_energy(ps[a], ps[b], g, params);
    }
  }
  return k;
}

double mechanical_kinetic_energy(const SystemState& state) {
  double k = 0.0;
  for (const auto& p : state.particles) k += 0.5 * p.mass * p.velocity.squaredNorm();
  return k;
}

double darwin_kinetic_energy(const SystemState& state, const InteractionParams& params) {
  return mechanical_kinetic_energy(state) + ampere_kinetic_energy(state, params);
}

double lagrangian(const SystemState& state, const InteractionParams& params) {
  return darwin_kinetic_energy(state, params) - coulomb_energy(state, params);
}

EnergyBreakdown total_energy(const SystemState& state, const InteractionParams& params) {
  EnergyBreakdown e;
  e.coulomb = coulomb_energy(state, params);
  e.mechanical_kinetic = mechanical_kinetic_energy(state);
  e.ampere_kinetic = ampere_kinetic_energy(state, params);
  e.total = e.coulomb + e.mechanical_kinetic + e.ampere_kinetic;
  return e;
}

Eigen::VectorXd generalized_momenta(const SystemState& state, const InteractionParams& params) {
  const auto& ps = state.particles;
  const std::size_t n = ps.size();
  Eigen::VectorXd p(3 * static_cast<Eigen::Index>(n));
  detail::parallel_for(n, params.threads, [&](std::size_t a) {
    Vec3 pa = ps[a].mass * ps[a].velocity;
    if (params.ampere_coupling) {
      for (std::size_t b = 0; b < n; ++b) {
        if (b == a) continue;
        const PairGeometry g = pair_geometry(ps[a], ps[b], params.softening);
        const double k = ampere_prefactor(ps[a], ps[b], params) * g.inv_s;
        pa += k * (ps[b].velocity + (g.r.dot(ps[b].velocity) / g.s2) * g.r);
      }
    }
    p.segment<3>(3 * static_cast<Eigen::Index>(a)) = pa;
  });
  return p;
}

MassMatrix assemble_mass_matrix(const SystemState& state, const InteractionParams& params) {
  const auto& ps = state.particles;
  const std::size_t n = ps.size();
  const auto dim = 3 * static_cast<Eigen::Index>(n);
  MassMatrix m{Eigen::MatrixXd::Zero(dim, dim)};
  // Row a owns the blocks (a, b) and (b, a) for b > a, so no two workers
  // touch the same block.
  detail::parallel_for(n, params.threads, [&](std::size_t a) {
    const auto ia = 3 * static_cast<Eigen::Index>(a);
    m.values.block<3, 3>(ia, ia).diagonal().setConstant(ps[a].mass);
    if (!params.ampere_coupling) return;
    for (std::size_t b = a + 1; b < n; ++b) {
      const auto ib = 3 * static_cast<Eigen::Index>(b);
      const Eigen::Matrix3d block = pair_coupling_block(ps[a], ps[b], params);
      m.values.block<3, 3>(ia, ib) = block;
      m.values.block<3, 3>(ib, ia) = block;
    }
  });
  return m;
}

Eigen::VectorXd lagrangian_position_gradient(const SystemState& state,
                                             const InteractionParams& params) {
  const auto& ps = state.particles;
  const std::size_t n = ps.size();
  Eigen::VectorXd grad(3 * static_cast<Eigen::Index>(n));
  detail::parallel_for(n, params.threads, [&](std::size_t a) {
    Vec3 ga = Vec3::Zero();
    for (std::size_t b = 0; b < n; ++b) {
      if (b == a) continue;
      // Always evaluate the pair in canonical order so the two partners see
      // exactly opposite contributions.
      if (a < b) {
        ga += pair_gradient(ps[a], ps[b], params);
      } else {
        ga -= pair_gradient(ps[b], ps[a], params);
      }
    }
    grad.segment<3>(3 * static_cast<Eigen::Index>(a)) = ga;
  });
  return grad;
}

Vec3 total_momentum(const Eigen::VectorXd& momenta) {
  Vec3 total = Vec3::Zero();
  for (Eigen::Index i = 0; i < momenta.size(); i += 3) total += momenta.segment<3>(i);
  return total;
}

Vec3 total_angular_momentum(const SystemState& state, const Eigen::VectorXd& momenta) {
  Vec3 total = Vec3::Zero();
  for (std::size_t a = 0; a < state.size(); ++a) {
    const Vec3 pa = momenta.segment<3>(3 * static_cast<Eigen::Index>(a));
    total += state.particles[a].position.cross(pa);
  }
  return total;
}

}  // namespace darwin
