#include "darwin/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Cholesky>

namespace darwin {

namespace {

bool has_velocity_coupling(const SystemState& state, const InteractionParams& params) {
  if (!params.ampere_coupling) return false;
  std::size_t charged = 0;
  for (const auto& p : state.particles) {
    if (p.charge != 0.0) ++charged;
  }
  return charged >= 2;
}

Eigen::VectorXd solve_cholesky(const MassMatrix& m, const Eigen::VectorXd& p,
                               const SolverOptions& options) {
  const Eigen::LLT<Eigen::MatrixXd> llt(m.values);
  if (llt.info() != Eigen::Success) {
    throw NotPositiveDefinite(
        "velocity-coupling matrix is not positive definite: particles too close or "
        "coupling too strong for the Darwin regime");
  }
  Eigen::VectorXd v = llt.solve(p);
  const double target = options.tol * p.norm();
  Eigen::VectorXd residual = p - m.values * v;
  // One round of iterative refinement recovers accuracy lost to conditioning.
  if (residual.norm() > target) {
    v += llt.solve(residual);
    residual = p - m.values * v;
  }
  if (residual.norm() > target) {
    throw SolverDidNotConverge("Cholesky solve residual " + std::to_string(residual.norm() / p.norm()) +
                               " exceeds solver tolerance");
  }
  return v;
}

Eigen::VectorXd solve_conjugate_gradient(const MassMatrix& m, const Eigen::VectorXd& p,
                                         const SolverOptions& options) {
  const Eigen::VectorXd inv_diag = m.values.diagonal().cwiseInverse();
  Eigen::VectorXd v = inv_diag.cwiseProduct(p);
  Eigen::VectorXd r = p - m.values * v;
  Eigen::VectorXd z = inv_diag.cwiseProduct(r);
  Eigen::VectorXd d = z;
  double rz = r.dot(z);
  const double target = options.tol * p.norm();
  for (std::size_t it = 0; it < options.max_iter; ++it) {
    if (r.norm() <= target) return v;
    const Eigen::VectorXd md = m.values * d;
    const double curvature = d.dot(md);
    if (!(curvature > 0.0)) {
      throw NotPositiveDefinite("conjugate gradient met non-positive curvature in the "
                                "velocity-coupling matrix");
    }
    const double alpha = rz / curvature;
    v += alpha * d;
    r -= alpha * md;
    z = inv_diag.cwiseProduct(r);
    const double rz_next = r.dot(z);
    d = z + (rz_next / rz) * d;
    rz = rz_next;
  }
  if (r.norm() <= target) return v;
  throw SolverDidNotConverge("conjugate gradient did not reach tolerance in " +
                             std::to_string(options.max_iter) + " iterations");
}

double energy_scale(const EnergyBreakdown& e) {
  if (e.total != 0.0) return std::abs(e.total);
  const double s = std::abs(e.coulomb) + std::abs(e.mechanical_kinetic) + std::abs(e.ampere_kinetic);
  return s > 0.0 ? s : 1.0;
}

// Relative size of an iterate update; 0/0 counts as converged.
double relative_change(const Eigen::VectorXd& next, const Eigen::VectorXd& prev) {
  const double diff = (next - prev).norm();
  if (diff == 0.0) return 0.0;
  const double scale = next.norm();
  return scale > 0.0 ? diff / scale : std::numeric_limits<double>::infinity();
}

struct PhaseRate {
  Eigen::VectorXd dr;
  Eigen::VectorXd dp;
};

// Evaluates (v, dL/dr) at positions r and momenta p.
PhaseRate phase_rate(SystemState& work, const InteractionParams& params,
                     const SolverOptions& solver, const Eigen::VectorXd& r,
                     const Eigen::VectorXd& p) {
  set_positions(work, r);
  PhaseRate rate;
  rate.dr = velocities_from_momenta(work, params, p, solver);
  set_velocities(work, rate.dr);
  rate.dp = lagrangian_position_gradient(work, params);
  return rate;
}

void check_velocity_cap(const SystemState& state, const InteractionParams& params) {
  const double frac = max_speed_fraction(state, params);
  if (frac > params.velocity_cap_fraction) {
    throw VelocityCapExceeded("particle speed reached " + std::to_string(frac) +
                              " c, above the velocity cap");
  }
}

}  // namespace

void IntegratorConfig::validate(bool allow_negative_dt) const {
  if (!std::isfinite(dt) || dt == 0.0 || (!allow_negative_dt && dt < 0.0)) {
    throw ValidationError("integrator.dt must be finite and > 0");
  }
  auto in_unit_interval = [](double x) { return x > 0.0 && x < 1.0; };
  if (!in_unit_interval(fixed_point_tol)) {
    throw ValidationError("integrator.fixed_point_tol must lie in (0, 1)");
  }
  if (!in_unit_interval(solver.tol)) {
    throw ValidationError("integrator.solver_tol must lie in (0, 1)");
  }
  if (fixed_point_max_iter == 0) {
    throw ValidationError("integrator.fixed_point_max_iter must be >= 1");
  }
  if (output_stride == 0) {
    throw ValidationError("integrator.output_stride must be >= 1");
  }
}

std::string_view to_string(Scheme scheme) {
  switch (scheme) {
    case Scheme::implicit_midpoint: return "implicit-midpoint";
    case Scheme::semi_implicit_euler: return "semi-implicit-euler";
  }
  return "unknown";
}

Scheme parse_scheme(std::string_view name) {
  if (name == "implicit-midpoint") return Scheme::implicit_midpoint;
  if (name == "semi-implicit-euler") return Scheme::semi_implicit_euler;
  throw ValidationError("integrator.scheme: unknown scheme '" + std::string(name) + "'");
}

std::string_view to_string(LinearSolverKind kind) {
  switch (kind) {
    case LinearSolverKind::cholesky: return "cholesky";
    case LinearSolverKind::conjugate_gradient: return "conjugate-gradient";
  }
  return "unknown";
}

LinearSolverKind parse_solver_kind(std::string_view name) {
  if (name == "cholesky") return LinearSolverKind::cholesky;
  if (name == "conjugate-gradient") return LinearSolverKind::conjugate_gradient;
  throw ValidationError("integrator.solver: unknown linear solver '" + std::string(name) + "'");
}

Eigen::VectorXd velocities_from_momenta(const SystemState& state, const InteractionParams& params,
                                        const Eigen::VectorXd& momenta,
                                        const SolverOptions& options) {
  if (momenta.size() != 3 * static_cast<Eigen::Index>(state.size())) {
    throw ValidationError("momentum vector length does not match particle count");
  }
  if (momenta.isZero(0.0)) return Eigen::VectorXd::Zero(momenta.size());

  if (!has_velocity_coupling(state, params)) {
    Eigen::VectorXd v(momenta.size());
    for (std::size_t a = 0; a < state.size(); ++a) {
      const auto i = 3 * static_cast<Eigen::Index>(a);
      v.segment<3>(i) = momenta.segment<3>(i) / state.particles[a].mass;
    }
    return v;
  }

  const MassMatrix m = assemble_mass_matrix(state, params);
  switch (options.kind) {
    case LinearSolverKind::cholesky:
      return solve_cholesky(m, momenta, options);
    case LinearSolverKind::conjugate_gradient:
      return solve_conjugate_gradient(m, momenta, options);
  }
  throw ValidationError("unknown linear solver");
}

PhasePoint PhasePoint::from_state(SystemState state, const InteractionParams& params) {
  validate_state(state, params);
  PhasePoint point{std::move(state), {}};
  point.momenta = generalized_momenta(point.state, params);
  return point;
}

void advance(PhasePoint& point, const InteractionParams& params, const IntegratorConfig& config) {
  config.validate(/*allow_negative_dt=*/true);
  const double dt = config.dt;
  const Eigen::VectorXd r0 = stacked_positions(point.state);
  const Eigen::VectorXd& p0 = point.momenta;
  SystemState work = point.state;

  Eigen::VectorXd r1;
  Eigen::VectorXd p1;
  switch (config.scheme) {
    case Scheme::implicit_midpoint: {
      // Solve (dr, dp) = dt * f(z0 + (dr, dp) / 2) by fixed-point iteration,
      // seeded with the explicit Euler increment.
      Eigen::VectorXd dr = dt * stacked_velocities(point.state);
      Eigen::VectorXd dp = dt * lagrangian_position_gradient(point.state, params);
      bool converged = false;
      double change = 0.0;
      for (std::size_t it = 0; it < config.fixed_point_max_iter; ++it) {
        const PhaseRate rate =
            phase_rate(work, params, config.solver, r0 + 0.5 * dr, p0 + 0.5 * dp);
        const Eigen::VectorXd dr_next = dt * rate.dr;
        const Eigen::VectorXd dp_next = dt * rate.dp;
        change = std::max(relative_change(dr_next, dr), relative_change(dp_next, dp));
        dr = dr_next;
        dp = dp_next;
        if (change <= config.fixed_point_tol) {
          converged = true;
          break;
        }
      }
      if (!converged) {
        throw FixedPointDidNotConverge("implicit midpoint iteration stalled at relative change " +
                                       std::to_string(change) + " after " +
                                       std::to_string(config.fixed_point_max_iter) +
                                       " iterations");
      }
      r1 = r0 + dr;
      p1 = p0 + dp;
      break;
    }
    case Scheme::semi_implicit_euler: {
      p1 = p0 + dt * lagrangian_position_gradient(point.state, params);
      const Eigen::VectorXd v_half = velocities_from_momenta(point.state, params, p1, config.solver);
      r1 = r0 + dt * v_half;
      break;
    }
  }

  set_positions(point.state, r1);
  set_velocities(point.state, velocities_from_momenta(point.state, params, p1, config.solver));
  point.momenta = std::move(p1);
  point.state.time += dt;
  check_velocity_cap(point.state, params);
}

SystemState step(const SystemState& state, const InteractionParams& params,
                 const IntegratorConfig& config) {
  PhasePoint point = PhasePoint::from_state(state, params);
  advance(point, params, config);
  return std::move(point.state);
}

SystemState coulomb_reference_step(const SystemState& state, const InteractionParams& params,
                                   const IntegratorConfig& config) {
  InteractionParams coulomb_only = params;
  coulomb_only.ampere_coupling = false;
  return step(state, coulomb_only, config);
}

Trajectory integrate(const SystemState& state, const InteractionParams& params,
                     const IntegratorConfig& config) {
  config.validate();
  PhasePoint point = PhasePoint::from_state(state, params);
  const double t0 = point.state.time;

  Trajectory traj;
  EnergyBreakdown energy = total_energy(point.state, params);
  traj.samples.push_back({t0, point.state, energy});

  for (std::size_t i = 1; i <= config.n_steps; ++i) {
    try {
      advance(point, params, config);
      point.state.time = t0 + static_cast<double>(i) * config.dt;
      const EnergyBreakdown next = total_energy(point.state, params);
      traj.max_step_energy_change = std::max(
          traj.max_step_energy_change, std::abs(next.total - energy.total) / energy_scale(energy));
      energy = next;
    } catch (const NumericalError& err) {
      traj.failure = IntegrationFailure{i, true, err.what()};
      break;
    } catch (const ValidationError& err) {
      traj.failure = IntegrationFailure{i, false, err.what()};
      break;
    }
    if (i % config.output_stride == 0) {
      traj.samples.push_back({point.state.time, point.state, energy});
    }
  }
  return traj;
}

ConservationReport conservation_report(const Trajectory& trajectory,
                                       const InteractionParams& params) {
  if (trajectory.samples.empty()) {
    throw ValidationError("conservation_report needs a non-empty trajectory");
  }
  const auto& first = trajectory.samples.front();
  const double e_scale = energy_scale(first.energy);
  const Eigen::VectorXd p0 = generalized_momenta(first.state, params);
  const Vec3 momentum0 = total_momentum(p0);
  const Vec3 angular0 = total_angular_momentum(first.state, p0);

  double p_scale = 0.0;
  double l_scale = 0.0;
  for (std::size_t a = 0; a < first.state.size(); ++a) {
    const Vec3 pa = p0.segment<3>(3 * static_cast<Eigen::Index>(a));
    p_scale += pa.norm();
    l_scale += first.state.particles[a].position.cross(pa).norm();
  }
  if (p_scale == 0.0) p_scale = 1.0;
  if (l_scale == 0.0) l_scale = 1.0;

  ConservationReport report;
  for (const auto& sample : trajectory.samples) {
    const Eigen::VectorXd p = generalized_momenta(sample.state, params);
    report.energy_drift =
        std::max(report.energy_drift, std::abs(sample.energy.total - first.energy.total) / e_scale);
    report.momentum_drift =
        std::max(report.momentum_drift, (total_momentum(p) - momentum0).norm() / p_scale);
    report.angular_momentum_drift =
        std::max(report.angular_momentum_drift,
                 (total_angular_momentum(sample.state, p) - angular0).norm() / l_scale);
  }
  return report;
}

double suggest_time_step(const SystemState& state, const InteractionParams& params,
                         const IntegratorConfig& config, double max_step_energy_change,
                         std::size_t probe_steps) {
  validate_state(state, params);
  const auto& ps = state.particles;
  double shortest = std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < ps.size(); ++a) {
    for (std::size_t b = a + 1; b < ps.size(); ++b) {
      const double s = std::sqrt((ps[a].position - ps[b].position).squaredNorm() +
                                 params.softening * params.softening);
      const double vrel = (ps[a].velocity - ps[b].velocity).norm();
      if (vrel > 0.0) shortest = std::min(shortest, s / vrel);
      const double qq = std::abs(ps[a].charge * ps[b].charge);
      if (qq > 0.0) {
        const double mu = ps[a].mass * ps[b].mass / (ps[a].mass + ps[b].mass);
        shortest = std::min(shortest, std::sqrt(mu * s * s * s / qq));
      }
    }
  }
  if (!std::isfinite(shortest)) {
    if (config.dt > 0.0) return config.dt;
    throw ValidationError("cannot infer a time step for a system without relative motion or "
                          "interactions");
  }

  IntegratorConfig probe = config;
  probe.dt = 0.05 * shortest;
  for (int halving = 0; halving < 60; ++halving, probe.dt *= 0.5) {
    try {
      PhasePoint point = PhasePoint::from_state(state, params);
      EnergyBreakdown energy = total_energy(point.state, params);
      double worst = 0.0;
      for (std::size_t i = 0; i < probe_steps; ++i) {
        advance(point, params, probe);
        const EnergyBreakdown next = total_energy(point.state, params);
        worst = std::max(worst, std::abs(next.total - energy.total) / energy_scale(energy));
        energy = next;
      }
      if (worst <= max_step_energy_change) return probe.dt;
    } catch (const NumericalError&) {
      // too coarse; halve and retry
    }
  }
  throw NumericalError("time-step search did not meet the energy-change target");
}

}  // namespace darwin
