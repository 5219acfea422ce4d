#pragma once

#include <Eigen/Core>

#include "darwin/particles.hpp"

namespace darwin {

// Order-(v/c)^2 Lagrangian of N point charges:
//
//   L = K - U
//   U = sum_{a<b} q_a q_b / s_ab
//   K = sum_a m_a |v_a|^2 / 2
//     + sum_{a<b} q_a q_b / (2 c^2 s_ab) (v_a.v_b + (n_ab.v_a)(n_ab.v_b))
//
// with s_ab = sqrt(|r_a - r_b|^2 + eps^2) and n_ab = (r_a - r_b) / s_ab. The
// same softened length appears in every denominator, so the softened system
// is itself an exact Lagrangian system and keeps its conservation laws.
//
// Pair sums run over a < b in lexicographic order. Per-particle quantities
// are reduced row by row in ascending partner index.

struct EnergyBreakdown {
  double coulomb = 0.0;             // U
  double mechanical_kinetic = 0.0;  // sum m v^2 / 2
  double ampere_kinetic = 0.0;      // velocity-velocity magnetic part of K
  double total = 0.0;               // K + U

  double kinetic() const { return mechanical_kinetic + ampere_kinetic; }
};

/// Dense symmetric 3N x 3N velocity-coupling matrix, p = M v. Diagonal
/// blocks are m_a I; off-diagonal blocks are
/// (q_a q_b / 2 c^2 s_ab)(I + n_ab n_ab^T).
struct MassMatrix {
  Eigen::MatrixXd values;

  Eigen::Index size() const { return values.rows(); }
  Eigen::VectorXd operator*(const Eigen::VectorXd& v) const { return values * v; }
};

double coulomb_energy(const SystemState& state, const InteractionParams& params);

/// Ampere (velocity-velocity) part of the kinetic energy alone.
double ampere_kinetic_energy(const SystemState& state, const InteractionParams& params);

double mechanical_kinetic_energy(const SystemState& state);

/// Full K including the mechanical and Ampere parts.
double darwin_kinetic_energy(const SystemState& state, const InteractionParams& params);

double lagrangian(const SystemState& state, const InteractionParams& params);

/// E = K + U. K is homogeneous quadratic in the velocities, so the Legendre
/// transform sum p.v - L collapses to this.
EnergyBreakdown total_energy(const SystemState& state, const InteractionParams& params);

/// p_a = dL/dv_a, stacked as a 3N vector.
Eigen::VectorXd generalized_momenta(const SystemState& state, const InteractionParams& params);

MassMatrix assemble_mass_matrix(const SystemState& state, const InteractionParams& params);

/// dL/dr_a at fixed velocities, stacked as a 3N vector (dyn).
Eigen::VectorXd lagrangian_position_gradient(const SystemState& state,
                                             const InteractionParams& params);

/// Sum of p_a over particles.
Vec3 total_momentum(const Eigen::VectorXd& momenta);

/// Sum of r_a x p_a over particles.
Vec3 total_angular_momentum(const SystemState& state, const Eigen::VectorXd& momenta);

}  // namespace darwin
