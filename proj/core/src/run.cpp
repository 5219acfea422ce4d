#include "darwin/run.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "darwin/errors.hpp"

#ifndef DARWIN_VERSION
#define DARWIN_VERSION "0.0.0"
#endif

namespace darwin {

namespace {

using json = nlohmann::json;

void append_double(std::string& out, double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  out += buf;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ValidationError("cannot write '" + path.string() + "'");
  out << text;
}

json wire_json(const WireEnergyReport& w) {
  return {{"eta", w.eta},
          {"eta_source", std::string(to_string(w.eta_source))},
          {"current_statamp", w.current_statamp},
          {"current_ampere", w.current_ampere},
          {"current_over_alfven", w.current_ratio},
          {"inductive_energy_erg", w.inductive_energy_erg.value_or(0.0)},
          {"removal_energies_erg", w.removal_energies_erg},
          {"drift_speed_cm_s", w.speed},
          {"w_magnetic_erg", w.w_magnetic_erg},
          {"w_magnetic_mev", w.w_magnetic_mev},
          {"inverse_beta_threshold_mev", kInverseBetaThresholdMev},
          {"above_threshold", w.threshold.above},
          {"threshold_margin_mev", w.threshold.margin_mev}};
}

json field_json(const FieldAnalysis& f) {
  json j = {{"dims", {f.shape.nx, f.shape.ny, f.shape.nz}},
            {"spacing_cm", f.shape.spacing},
            {"reconstruction_error", f.reconstruction_error},
            {"transverse_divergence", f.transverse_divergence},
            {"mean_square_longitudinal", f.mean_square.longitudinal},
            {"mean_square_transverse", f.mean_square.transverse},
            {"mean_square_total", f.mean_square.total},
            {"parseval_defect", f.parseval_defect}};
  if (f.poisson_residual) j["poisson_residual"] = *f.poisson_residual;
  if (f.gauss_law_residual) j["gauss_law_residual"] = *f.gauss_law_residual;
  if (f.erased_longitudinal_gauss_residual) {
    j["erased_longitudinal_gauss_residual"] = *f.erased_longitudinal_gauss_residual;
  }
  return j;
}

}  // namespace

std::string_view tool_version() { return DARWIN_VERSION; }

std::string trajectory_csv(const Trajectory& trajectory, const std::optional<WireSpec>& wire,
                           const PhysicalConstants& consts) {
  std::string out;
  out += "time";
  if (!trajectory.samples.empty()) {
    for (const auto& p : trajectory.samples.front().state.particles) {
      const std::string id = std::to_string(p.id);
      for (const char* col : {"x_", "y_", "z_", "vx_", "vy_", "vz_"}) {
        out += ',';
        out += col;
        out += id;
      }
    }
  }
  out += ",coulomb,mechanical_kinetic,ampere_kinetic,total_energy";
  if (wire) out += ",wire_current,w_magnetic";
  out += '\n';

  for (const auto& sample : trajectory.samples) {
    append_double(out, sample.time);
    for (const auto& p : sample.state.particles) {
      for (int c = 0; c < 3; ++c) {
        out += ',';
        append_double(out, p.position[c]);
      }
      for (int c = 0; c < 3; ++c) {
        out += ',';
        append_double(out, p.velocity[c]);
      }
    }
    for (double v : {sample.energy.coulomb, sample.energy.mechanical_kinetic,
                     sample.energy.ampere_kinetic, sample.energy.total}) {
      out += ',';
      append_double(out, v);
    }
    if (wire) {
      const double current = wire_current(sample.state, *wire);
      const double w = magnetic_enhancement(wire->eta, current,
                                            carrier_drift_speed(sample.state, *wire), consts);
      out += ',';
      append_double(out, current);
      out += ',';
      append_double(out, w);
    }
    out += '\n';
  }
  return out;
}

RunArtifacts run(const Scenario& scenario, const std::filesystem::path& out_dir,
                 const RunOptions& options) {
  if (!(options.c_scale > 0.0)) throw ValidationError("--c-scale must be > 0");
  std::filesystem::create_directories(out_dir);

  const SystemState state = initial_state(scenario);
  InteractionParams params = scenario.interaction;
  params.c *= options.c_scale;
  params.threads = options.threads;
  params.ampere_coupling = !options.coulomb_only;

  IntegratorConfig config = scenario.integrator;
  if (scenario.auto_dt) {
    config.dt = suggest_time_step(state, params, config, scenario.auto_dt_step_energy_change);
  }

  RunArtifacts art;
  art.dt = config.dt;
  art.provenance = Provenance{std::string(tool_version()), scenario_hash(scenario), scenario.seed,
                              std::string(kRandomAlgorithm)};

  const Trajectory traj = integrate(state, params, config);
  art.samples = traj.samples.size();
  art.failure = traj.failure;
  art.max_step_energy_change = traj.max_step_energy_change;
  art.step_energy_warning = traj.max_step_energy_change > kStepEnergyWarningThreshold;
  art.conservation = conservation_report(traj, params);

  const PhysicalConstants consts = PhysicalConstants::codata2018();
  const SystemState& last = traj.samples.back().state;
  if (scenario.wire) art.wire = wire_energy_report(last, *scenario.wire, consts);
  if (scenario.grid) {
    const auto charges = point_charges(last);
    FieldGridFile grid;
    grid.shape = scenario.grid->shape;
    grid.density = deposit_charges(charges, grid.shape, scenario.grid->smearing);
    art.field = analyze_field_grid(grid);
  }

  art.trajectory_csv = out_dir / "trajectory.csv";
  art.report_json = out_dir / "report.json";
  write_text(art.trajectory_csv, trajectory_csv(traj, scenario.wire, consts));

  json report;
  report["provenance"] = {{"tool_version", art.provenance.tool_version},
                          {"config_hash", art.provenance.config_hash},
                          {"random_algorithm", art.provenance.random_algorithm}};
  report["provenance"]["seed"] = art.provenance.seed ? json(*art.provenance.seed) : json(nullptr);
  report["run"] = {{"c_scale", options.c_scale},
                   {"coulomb_only", options.coulomb_only},
                   {"dt", art.dt},
                   {"auto_dt", scenario.auto_dt},
                   {"samples", art.samples},
                   {"max_step_energy_change", art.max_step_energy_change},
                   {"step_energy_warning", art.step_energy_warning}};
  report["conservation"] = {{"energy_drift", art.conservation.energy_drift},
                            {"momentum_drift", art.conservation.momentum_drift},
                            {"angular_momentum_drift", art.conservation.angular_momentum_drift}};
  if (art.wire) report["wire"] = wire_json(*art.wire);
  if (art.field) report["field"] = field_json(*art.field);
  if (art.failure) {
    report["failure"] = {{"step", art.failure->step_index},
                         {"numerical", art.failure->numerical},
                         {"message", art.failure->message}};
  }
  write_text(art.report_json, report.dump(2) + "\n");
  return art;
}

}  // namespace darwin
