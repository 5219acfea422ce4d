// darwin-em: command line front end for the darwin core library.

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "darwin/errors.hpp"
#include "darwin/grid_io.hpp"
#include "darwin/run.hpp"
#include "darwin/scenario.hpp"
#include "darwin/units.hpp"
#include "darwin/wire.hpp"

namespace fs = std::filesystem;
using namespace darwin;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitNumerical = 3;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

// Maps library exceptions onto the documented exit codes.
template <class Fn>
int guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const SyntaxError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  }
}

// ---- simulate ----

struct SimulateArgs {
  std::vector<std::string> scenarios;
  std::string out;
  double c_scale = 1.0;
  bool quiet = false;
  bool coulomb_only = false;
  unsigned jobs = 1;
  unsigned threads = 1;
};

struct JobResult {
  int code = kExitOk;
  std::string out;
  std::string err;
};

JobResult simulate_one(const std::string& path, const fs::path& out_dir, const SimulateArgs& a) {
  JobResult r;
  std::ostringstream out, err;
  r.code = guarded([&] {
    const Scenario scenario = load_scenario(path);
    RunOptions opts;
    opts.c_scale = a.c_scale;
    opts.threads = a.threads;
    opts.coulomb_only = a.coulomb_only;
    const RunArtifacts art = run(scenario, out_dir, opts);
    if (art.step_energy_warning) {
      err << "warning: " << path << ": per-step relative energy change "
          << fmt(art.max_step_energy_change) << " exceeds " << fmt(kStepEnergyWarningThreshold)
          << "; consider a smaller dt\n";
    }
    if (!a.quiet) {
      out << path << " -> " << out_dir.string() << "\n"
          << "  dt                      " << fmt(art.dt) << " s\n"
          << "  samples                 " << art.samples << "\n"
          << "  energy drift            " << fmt(art.conservation.energy_drift) << "\n"
          << "  momentum drift          " << fmt(art.conservation.momentum_drift) << "\n"
          << "  angular momentum drift  " << fmt(art.conservation.angular_momentum_drift) << "\n"
          << "  max step energy change  " << fmt(art.max_step_energy_change) << "\n"
          << "  config hash             " << art.provenance.config_hash << "\n";
    }
    if (art.failure) {
      err << "numerical failure in " << path << " at step " << art.failure->step_index << ": "
          << art.failure->message << "\n";
      return art.failure->numerical ? kExitNumerical : kExitValidation;
    }
    return kExitOk;
  });
  r.out = out.str();
  r.err = err.str();
  return r;
}

int simulate(const SimulateArgs& a) {
  const bool batch = a.scenarios.size() > 1;
  if (batch) {
    std::vector<std::string> stems;
    for (const auto& s : a.scenarios) stems.push_back(fs::path(s).stem().string());
    std::sort(stems.begin(), stems.end());
    if (std::adjacent_find(stems.begin(), stems.end()) != stems.end()) {
      std::cerr << "error: scenario file names must have distinct stems in batch mode\n";
      return kExitValidation;
    }
  }

  std::vector<JobResult> results(a.scenarios.size());
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next++; i < a.scenarios.size(); i = next++) {
      const fs::path dir =
          batch ? fs::path(a.out) / fs::path(a.scenarios[i]).stem() : fs::path(a.out);
      results[i] = simulate_one(a.scenarios[i], dir, a);
    }
  };
  {
    const unsigned n = std::max(1u, std::min<unsigned>(a.jobs, a.scenarios.size()));
    std::vector<std::jthread> pool;
    for (unsigned t = 1; t < n; ++t) pool.emplace_back(worker);
    worker();
  }

  // Worst code wins: numerical (3) over validation (2) over success.
  int code = kExitOk;
  for (const auto& r : results) {
    std::cout << r.out;
    std::cerr << r.err;
    code = std::max(code, r.code);
  }
  return code;
}

// ---- wire-energy ----

struct WireArgs {
  std::optional<double> eta;
  std::optional<double> length;
  std::optional<double> radius;
  std::optional<double> current_amp;
  std::optional<double> v_over_c;
  std::optional<std::string> scenario;
  std::string format = "text";
};

nlohmann::json report_json(const WireEnergyReport& r) {
  nlohmann::json j = {{"eta", r.eta},
                      {"eta_source", std::string(to_string(r.eta_source))},
                      {"current_statamp", r.current_statamp},
                      {"current_ampere", r.current_ampere},
                      {"current_over_alfven", r.current_ratio},
                      {"speed_cm_per_s", r.speed},
                      {"w_magnetic_erg", r.w_magnetic_erg},
                      {"w_magnetic_mev", r.w_magnetic_mev},
                      {"threshold_mev", kInverseBetaThresholdMev},
                      {"above_threshold", r.threshold.above},
                      {"threshold_margin_mev", r.threshold.margin_mev},
                      {"removal_energies_erg", r.removal_energies_erg}};
  if (r.inductive_energy_erg) j["inductive_energy_erg"] = *r.inductive_energy_erg;
  return j;
}

std::string report_text(const WireEnergyReport& r) {
  std::ostringstream o;
  o << "eta                      " << fmt(r.eta) << " (" << to_string(r.eta_source) << ")\n"
    << "current                  " << fmt(r.current_ampere) << " A  (" << fmt(r.current_statamp)
    << " statA)\n"
    << "I / I0                   " << fmt(r.current_ratio) << "\n"
    << "electron speed           " << fmt(r.speed) << " cm/s\n";
  if (r.inductive_energy_erg) {
    o << "inductive energy         " << fmt(*r.inductive_energy_erg) << " erg\n";
  }
  o << "W_magnetic               " << fmt(r.w_magnetic_mev) << " MeV  (" << fmt(r.w_magnetic_erg)
    << " erg)\n"
    << "p + e -> n + nu          " << (r.threshold.above ? "above" : "below") << " threshold "
    << fmt(kInverseBetaThresholdMev) << " MeV, margin " << fmt(r.threshold.margin_mev)
    << " MeV\n";
  for (std::size_t i = 0; i < r.removal_energies_erg.size(); ++i) {
    o << "removal energy [" << i << "]" << std::string(i < 10 ? 6 : 5, ' ')
      << fmt(r.removal_energies_erg[i]) << " erg\n";
  }
  return o.str();
}

int wire_energy(const WireArgs& a) {
  const PhysicalConstants consts = PhysicalConstants::codata2018();
  WireEnergyReport report;
  if (a.scenario) {
    if (a.eta || a.length || a.radius || a.current_amp || a.v_over_c) {
      throw ValidationError("--scenario cannot be combined with wire flags");
    }
    const Scenario s = load_scenario(*a.scenario);
    if (!s.wire) throw ValidationError(*a.scenario + ": scenario has no wire section");
    report = wire_energy_report(initial_state(s), *s.wire, consts);
  } else {
    if (!a.current_amp) throw ValidationError("--current-amp is required");
    if (!a.v_over_c) throw ValidationError("--v-over-c is required");
    if (!(*a.v_over_c > 0.0 && *a.v_over_c < 1.0)) {
      throw ValidationError("--v-over-c must lie in (0, 1)");
    }
    WireSpec wire;
    if (a.eta) {
      if (a.radius) throw ValidationError("give --eta or --radius, not both");
      wire = WireSpec::with_eta(a.length.value_or(1.0), Vec3::UnitZ(), *a.eta);
    } else {
      if (!a.length || !a.radius) throw ValidationError("give --eta, or --length and --radius");
      wire = WireSpec::thin_wire(*a.length, *a.radius, Vec3::UnitZ());
    }
    report = wire_energy_report(wire, to_gaussian(*a.current_amp, QuantityKind::current, consts),
                                *a.v_over_c * consts.c, consts);
    if (!a.length) report.inductive_energy_erg.reset();
  }
  if (a.format == "json") {
    std::cout << report_json(report).dump(2) << "\n";
  } else {
    std::cout << report_text(report);
  }
  return kExitOk;
}

// ---- field-analyze ----

int field_analyze(const std::string& path, const std::optional<std::string>& csv) {
  const FieldAnalysis a = analyze_field_grid(read_grid_file(path));
  std::cout << field_analysis_text(a);
  if (csv) {
    std::ofstream out(*csv);
    if (!out) throw ValidationError("cannot write '" + *csv + "'");
    out << field_analysis_csv(a);
  }
  return kExitOk;
}

// ---- constants ----

int constants(const std::string& format) {
  const PhysicalConstants g = PhysicalConstants::codata2018();
  const SiConstants si = SiConstants::codata2018();
  const double i0 = alfven_current(g);
  const double i0_si = alfven_current_si_route(si);
  if (format == "json") {
    nlohmann::json j = {
        {"gaussian",
         {{"c_cm_per_s", g.c},
          {"e_statC", g.e_mag},
          {"m_e_g", g.m_e},
          {"m_e_c2_erg", g.rest_energy()},
          {"alfven_current_statA", alfven_current_gaussian(g)}}},
        {"si",
         {{"c_m_per_s", si.c},
          {"e_C", si.e},
          {"m_e_kg", si.m_e},
          {"epsilon0_F_per_m", si.epsilon0},
          {"alfven_current_A", i0_si}}},
        {"alfven_current_A", i0},
        {"m_e_c2_MeV", erg_to_mev(g.rest_energy(), g)},
        {"statA_per_A", g.statamp_per_ampere},
        {"erg_per_MeV", g.erg_per_mev},
        {"inverse_beta_threshold_MeV", kInverseBetaThresholdMev}};
    std::cout << j.dump(2) << "\n";
    return kExitOk;
  }
  const auto row = [](const std::string& name, double v, const std::string& unit) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "%-34s %-22.15g %s\n", name.c_str(), v, unit.c_str());
    std::cout << buf;
  };
  std::cout << "Gaussian (CGS)\n";
  row("  c", g.c, "cm/s");
  row("  e", g.e_mag, "statC");
  row("  m_e", g.m_e, "g");
  row("  m_e c^2", g.rest_energy(), "erg");
  row("  I0 = m c^3 / e", alfven_current_gaussian(g), "statA");
  std::cout << "SI\n";
  row("  c", si.c, "m/s");
  row("  e", si.e, "C");
  row("  m_e", si.m_e, "kg");
  row("  epsilon0", si.epsilon0, "F/m");
  row("  I0 = 4 pi epsilon0 m c^3 / e", i0_si, "A");
  std::cout << "Derived\n";
  row("  I0 (from Gaussian)", i0, "A");
  row("  m_e c^2", erg_to_mev(g.rest_energy(), g), "MeV");
  row("  statA per A", g.statamp_per_ampere, "");
  row("  erg per MeV", g.erg_per_mev, "");
  row("  (m_n - m_p - m_e) c^2", kInverseBetaThresholdMev, "MeV");
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Darwin-Lagrangian particle dynamics, wire energetics and field audits"};
  app.set_version_flag("--version", std::string(tool_version()));
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* simulate_cmd = app.add_subcommand("simulate", "integrate scenario files");
  simulate_cmd->add_option("scenario", sim.scenarios, "scenario JSON file(s)")->required();
  simulate_cmd->add_option("--out", sim.out, "output directory")->required();
  simulate_cmd->add_option("--c-scale", sim.c_scale, "multiply c (Coulomb-limit studies)");
  simulate_cmd->add_flag("--quiet", sim.quiet, "suppress the summary");
  simulate_cmd->add_flag("--coulomb-only", sim.coulomb_only, "drop the Ampere coupling");
  simulate_cmd->add_option("--jobs", sim.jobs, "scenarios run concurrently")
      ->check(CLI::PositiveNumber);
  simulate_cmd->add_option("--threads", sim.threads, "threads per scenario")
      ->check(CLI::PositiveNumber);

  WireArgs wire;
  auto* wire_cmd = app.add_subcommand("wire-energy", "inductive wire energetics");
  wire_cmd->add_option("--eta", wire.eta, "inductance per unit length (Gaussian)");
  wire_cmd->add_option("--length", wire.length, "wire length, cm");
  wire_cmd->add_option("--radius", wire.radius, "wire radius, cm (thin-wire model)");
  wire_cmd->add_option("--current-amp", wire.current_amp, "current, A");
  wire_cmd->add_option("--v-over-c", wire.v_over_c, "electron speed as a fraction of c");
  wire_cmd->add_option("--scenario", wire.scenario, "take wire and particles from a scenario");
  wire_cmd->add_option("--format", wire.format, "text or json")
      ->check(CLI::IsMember({"text", "json"}));

  std::string grid_path;
  std::optional<std::string> csv_path;
  auto* field_cmd = app.add_subcommand("field-analyze", "audit a grid file");
  field_cmd->add_option("grid", grid_path, "grid file")->required();
  field_cmd->add_option("--csv", csv_path, "also write metrics as CSV");

  std::string const_format = "text";
  auto* const_cmd = app.add_subcommand("constants", "print physical constants");
  const_cmd->add_option("--format", const_format, "text or json")
      ->check(CLI::IsMember({"text", "json"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitValidation;
  }

  if (*simulate_cmd) return simulate(sim);
  if (*wire_cmd) return guarded([&] { return wire_energy(wire); });
  if (*field_cmd) return guarded([&] { return field_analyze(grid_path, csv_path); });
  return guarded([&] { return constants(const_format); });
}
