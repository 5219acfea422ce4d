#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "darwin/dynamics.hpp"
#include "darwin/grid_io.hpp"
#include "darwin/scenario.hpp"
#include "darwin/wire.hpp"

namespace darwin {

std::string_view tool_version();

struct RunOptions {
  double c_scale = 1.0;   // multiplies interaction.c (Coulomb-limit studies)
  unsigned threads = 1;
  bool coulomb_only = false;  // drop the Ampere coupling
};

struct Provenance {
  std::string tool_version;
  std::string config_hash;
  std::optional<std::uint64_t> seed;
  std::string random_algorithm;
};

struct RunArtifacts {
  std::filesystem::path trajectory_csv;
  std::filesystem::path report_json;
  double dt = 0.0;
  std::size_t samples = 0;
  ConservationReport conservation;
  double max_step_energy_change = 0.0;
  bool step_energy_warning = false;
  std::optional<WireEnergyReport> wire;  // evaluated on the last sample
  std::optional<FieldAnalysis> field;    // charges of the last sample
  Provenance provenance;
  std::optional<IntegrationFailure> failure;
};

/// Integrates the scenario and writes trajectory.csv and report.json into
/// `out_dir` (created if missing). Numerical failures during stepping do not
/// throw: the partial trajectory is written and `failure` is set.
RunArtifacts run(const Scenario& scenario, const std::filesystem::path& out_dir,
                 const RunOptions& options = {});

/// CSV of a trajectory, 17 significant digits per value. When `wire` is
/// given, wire_current (statA) and w_magnetic (erg) columns are appended.
std::string trajectory_csv(const Trajectory& trajectory, const std::optional<WireSpec>& wire,
                           const PhysicalConstants& consts = PhysicalConstants::codata2018());

}  // namespace darwin
