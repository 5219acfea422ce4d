#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "darwin/errors.hpp"
#include "darwin/lagrangian.hpp"
#include "darwin/particles.hpp"

namespace darwin {

// Phase-space integration of the Euler-Lagrange equations in (r, p):
//
//   dr/dt = v,  with M(r) v = p
//   dp/dt = dL/dr  at fixed v
//
// Working with p avoids differentiating M(r) along the trajectory.

enum class Scheme { implicit_midpoint, semi_implicit_euler };
enum class LinearSolverKind { cholesky, conjugate_gradient };

struct SolverOptions {
  LinearSolverKind kind = LinearSolverKind::cholesky;
  double tol = 1e-12;          // relative residual ||Mv - p|| / ||p||
  std::size_t max_iter = 1000; // conjugate gradient only

  bool operator==(const SolverOptions&) const = default;
};

struct IntegratorConfig {
  double dt = 0.0;  // s
  std::size_t n_steps = 0;
  Scheme scheme = Scheme::implicit_midpoint;
  double fixed_point_tol = 1e-12;
  std::size_t fixed_point_max_iter = 50;
  SolverOptions solver;
  std::size_t output_stride = 1;

  /// Throws ValidationError. `allow_negative_dt` admits backward stepping.
  void validate(bool allow_negative_dt = false) const;
  bool operator==(const IntegratorConfig&) const = default;
};

std::string_view to_string(Scheme scheme);
Scheme parse_scheme(std::string_view name);
std::string_view to_string(LinearSolverKind kind);
LinearSolverKind parse_solver_kind(std::string_view name);

/// Velocity left the configured cap during integration.
class VelocityCapExceeded : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Solves M(x) v = p. Throws NotPositiveDefinite or SolverDidNotConverge.
Eigen::VectorXd velocities_from_momenta(const SystemState& state, const InteractionParams& params,
                                        const Eigen::VectorXd& momenta,
                                        const SolverOptions& options = {});

/// A state together with its generalized momenta. Positions, velocities and
/// momenta are kept mutually consistent.
struct PhasePoint {
  SystemState state;
  Eigen::VectorXd momenta;

  static PhasePoint from_state(SystemState state, const InteractionParams& params);
};

/// Advances `point` by one step of `config.dt` (which may be negative).
void advance(PhasePoint& point, const InteractionParams& params, const IntegratorConfig& config);

SystemState step(const SystemState& state, const InteractionParams& params,
                 const IntegratorConfig& config);

/// Same contract as step with the Ampere coupling switched off.
SystemState coulomb_reference_step(const SystemState& state, const InteractionParams& params,
                                   const IntegratorConfig& config);

struct TrajectorySample {
  double time = 0.0;
  SystemState state;
  EnergyBreakdown energy;
};

struct IntegrationFailure {
  std::size_t step_index = 0;  // 1-based index of the step that failed
  bool numerical = true;       // false for validation-type failures
  std::string message;
};

struct Trajectory {
  std::vector<TrajectorySample> samples;
  /// Largest |E_{n+1} - E_n| / |E_n| seen over single steps.
  double max_step_energy_change = 0.0;
  std::optional<IntegrationFailure> failure;

  bool ok() const { return !failure.has_value(); }
};

/// Repeats `advance` n_steps times, recording every output_stride-th state.
/// Stops at the first error and returns the partial trajectory with the
/// cause recorded in `failure`.
Trajectory integrate(const SystemState& state, const InteractionParams& params,
                     const IntegratorConfig& config);

struct ConservationReport {
  double energy_drift = 0.0;
  double momentum_drift = 0.0;
  double angular_momentum_drift = 0.0;
};

/// Maximum drifts relative to the first sample. Momentum drifts are
/// normalized by sum_a |p_a| (resp. sum_a |r_a x p_a|) at t = 0, or taken as
/// absolute when that sum vanishes.
ConservationReport conservation_report(const Trajectory& trajectory,
                                       const InteractionParams& params);

/// Per-step relative energy change above which the CLI warns.
inline constexpr double kStepEnergyWarningThreshold = 1e-4;

/// Step-size heuristic. Starts from a fraction of the shortest pairwise
/// crossing and Coulomb times, then halves dt until a short probe run keeps
/// the per-step relative energy change below `max_step_energy_change`.
double suggest_time_step(const SystemState& state, const InteractionParams& params,
                         const IntegratorConfig& config,
                         double max_step_energy_change = kStepEnergyWarningThreshold,
                         std::size_t probe_steps = 20);

}  // namespace darwin
