// Acceptance suite: one PASS/FAIL line per criterion, exit status 0 only if
// every criterion passes.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "darwin/dynamics.hpp"
#include "darwin/errors.hpp"
#include "darwin/field.hpp"
#include "darwin/lagrangian.hpp"
#include "darwin/run.hpp"
#include "darwin/scenario.hpp"
#include "darwin/units.hpp"
#include "darwin/wire.hpp"
#include "support/test_states.hpp"

using namespace darwin;
namespace fs = std::filesystem;

namespace {

const std::string kData = DARWIN_TEST_DATA_DIR;
constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("darwin_acceptance_" + name);
  fs::remove_all(p);
  return p;
}

// 1. I0 against the quoted 17.045089 kA, and Gaussian vs SI routes.
Outcome alfven_current_check() {
  const double gaussian = alfven_current();
  const double si = alfven_current_si_route();
  const double vs_quoted = std::abs(gaussian - 17045.089) / 17045.089;
  const double routes = std::abs(gaussian - si) / si;
  return {vs_quoted <= 2e-4 && routes <= 1e-10,
          "I0 = " + num(gaussian) + " A, vs quoted " + num(vs_quoted) + ", routes " + num(routes)};
}

// 2. W for eta = 4, I = 0.5 MA, v = 0.06 c against hand arithmetic in SI.
Outcome w_magnetic_check() {
  const PhysicalConstants k = PhysicalConstants::codata2018();
  const double w = magnetic_enhancement(4.0, 5e5 * 2.99792458e9, 0.06 * k.c, k);
  const double w_mev = std::abs(w) / 1.602176634e-6;

  const double m = 9.1093837015e-31, c = 299792458.0, e = 1.602176634e-19;
  const double mc2_mev = m * c * c / e / 1e6;
  const double i0_amp = 1e7 * m * c / e;  // 4 pi eps0 m c^3 / e with 4 pi eps0 = 1e7 / c^2
  const double hand = 4.0 * mc2_mev * (5e5 / i0_amp) * 0.06;
  const double rel = std::abs(w_mev - hand) / hand;
  return {w_mev >= 1.0 && w_mev < 1000.0 && rel <= 1e-12,
          "|W| = " + num(w_mev) + " MeV, hand " + num(hand) + ", rel " + num(rel)};
}

// 3. Removal-energy cross term vs |W| over 1e4 draws with v parallel to n.
Outcome removal_consistency_check() {
  const PhysicalConstants k = PhysicalConstants::codata2018();
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  for (int draw = 0; draw < 10000; ++draw) {
    const double eta = 0.1 + 30.0 * u(gen);
    const double current = (1.0 + 1e7 * u(gen)) * k.statamp_per_ampere;
    const double speed = (1e-4 + 0.5 * u(gen)) * k.c;
    const Vec3 n = Vec3(u(gen) - 0.5, u(gen) - 0.5, u(gen) - 0.5).normalized();
    const WireSpec wire = WireSpec::with_eta(0.1 + u(gen), n, eta);
    const Particle electron{0, -k.e_mag, k.m_e, Vec3::Zero(), speed * n};
    const double removal = std::abs(removal_magnetic_term(electron, wire, current, k));
    const double enhancement = std::abs(magnetic_enhancement(eta, current, speed, k));
    worst = std::max(worst, std::abs(removal - enhancement) / enhancement);
  }
  return {worst <= 1e-12, "worst rel " + num(worst) + " over 10000 draws"};
}

// 4. Gradient and momenta vs central differences of a naive Lagrangian.
Outcome gradient_check() {
  double worst_grad = 0.0, worst_mom = 0.0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const double eps = (seed % 2 == 0) ? 0.0 : 0.05;
    InteractionParams p = test::test_params(eps);
    const SystemState s = test::random_state(1000 + seed, 5);
    worst_grad = std::max(worst_grad, test::rel_err(lagrangian_position_gradient(s, p),
                                                    test::fd_gradient(s, eps, p.c, 0, 1e-5)));
    worst_mom = std::max(worst_mom, test::rel_err(generalized_momenta(s, p),
                                                  test::fd_gradient(s, eps, p.c, 1, 1e-3)));
  }
  return {worst_grad <= 1e-6 && worst_mom <= 1e-6,
          "gradient " + num(worst_grad) + ", momenta " + num(worst_mom)};
}

// 5. Conservation on the seeded 8-particle plasma with the auto time step.
Outcome conservation_check() {
  const Scenario s = load_scenario(kData + "/acceptance_plasma.json");
  const RunArtifacts art = run(s, scratch("conservation"));
  if (art.failure) return {false, "integration failed: " + art.failure->message};
  const ConservationReport& c = art.conservation;
  return {c.energy_drift <= 1e-6 && c.momentum_drift <= 1e-6 && c.angular_momentum_drift <= 1e-6,
          "dt " + num(art.dt) + " s, energy " + num(c.energy_drift) + ", momentum " +
              num(c.momentum_drift) + ", angular " + num(c.angular_momentum_drift)};
}

std::vector<std::vector<double>> csv_rows(const std::string& text) {
  std::vector<std::vector<double>> rows;
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    std::vector<double> row;
    std::istringstream cells(line);
    std::string cell;
    while (std::getline(cells, cell, ',')) row.push_back(std::stod(cell));
    rows.push_back(row);
  }
  return rows;
}

// 6. c scaled by 1e6: Darwin and Coulomb-only runs of the same ensemble.
Outcome coulomb_limit_check() {
  Scenario s = load_scenario(kData + "/acceptance_plasma.json");
  s.integrator.n_steps = 100;
  s.integrator.output_stride = 1;
  // One shared dt, so both runs step through the same times.
  InteractionParams scaled = s.interaction;
  scaled.c *= 1e6;
  s.integrator.dt = suggest_time_step(initial_state(s), scaled, s.integrator,
                                      s.auto_dt_step_energy_change);
  s.auto_dt = false;

  RunOptions darwin_opts, coulomb_opts;
  darwin_opts.c_scale = coulomb_opts.c_scale = 1e6;
  coulomb_opts.coulomb_only = true;
  const RunArtifacts a = run(s, scratch("limit_darwin"), darwin_opts);
  const RunArtifacts b = run(s, scratch("limit_coulomb"), coulomb_opts);
  if (a.failure || b.failure) return {false, "integration failed"};
  const auto ra = csv_rows(slurp(a.trajectory_csv));
  const auto rb = csv_rows(slurp(b.trajectory_csv));
  if (ra.size() != rb.size() || ra.size() != 101) return {false, "sample count mismatch"};

  // Positions and velocities of every particle, relative to their own scale.
  const std::size_t n = initial_state(s).size();
  double worst = 0.0;
  for (std::size_t i = 0; i < ra.size(); ++i) {
    for (std::size_t block = 0; block < 2; ++block) {
      double diff = 0.0, scale = 0.0;
      for (std::size_t p = 0; p < n; ++p) {
        for (std::size_t k = 0; k < 3; ++k) {
          const std::size_t col = 1 + 6 * p + 3 * block + k;
          diff += std::pow(ra[i][col] - rb[i][col], 2);
          scale += std::pow(rb[i][col], 2);
        }
      }
      worst = std::max(worst, std::sqrt(diff / scale));
    }
  }
  return {worst <= 1e-8, "worst rel " + num(worst) + " over 100 steps"};
}

// 7. Spectral field suite on a 32^3 grid.
Outcome field_check() {
  const GridShape shape{32, 32, 32, 0.1};
  const Vec3 box = shape.box();
  const auto sample = [&](const std::function<double(const Vec3&)>& f) {
    ScalarGrid g(shape);
    for (std::size_t i = 0; i < 32; ++i)
      for (std::size_t j = 0; j < 32; ++j)
        for (std::size_t k = 0; k < 32; ++k) g(i, j, k) = f(shape.node_position(i, j, k));
    return g;
  };

  double poisson = 0.0;
  for (const Vec3& m : {Vec3(1, 0, 0), Vec3(2, 3, 0), Vec3(5, 1, 7), Vec3(15, 15, 15)}) {
    const Vec3 k = 2.0 * kPi * m.cwiseQuotient(box);
    const ScalarGrid rho = sample([&](const Vec3& x) { return std::cos(k.dot(x) + 0.3); });
    poisson = std::max(poisson, poisson_residual(solve_poisson(rho), rho));
  }

  std::mt19937_64 gen(11);
  std::normal_distribution<double> d;
  VectorGrid f(shape);
  for (auto& c : f.components)
    for (double& v : c) v = d(gen);
  const DecomposedField parts = helmholtz_decompose(f);
  const double reconstruction = rms(parts.longitudinal + parts.transverse - f) / rms(f);
  const double transverse_div = relative_divergence(parts.transverse);
  const MeanSquareSplit split = mean_square_field_split(f);
  const double parseval = std::abs(split.longitudinal + split.transverse - split.total) / split.total;

  // Two opposite Gaussian charges; drop the longitudinal part of their field.
  const std::vector<PointCharge> pair{{1.0, Vec3(1.2, 1.6, 1.6)}, {-1.0, Vec3(2.0, 1.6, 1.6)}};
  const ScalarGrid rho = deposit_charges(pair, shape);
  const VectorGrid e = electric_field(solve_poisson(rho));
  const double erased = gauss_law_residual(helmholtz_decompose(e).transverse, rho);

  const bool ok = poisson <= 1e-10 && reconstruction <= 1e-10 && transverse_div <= 1e-10 &&
                  parseval <= 1e-12 && std::abs(erased - 1.0) <= 1e-10;
  return {ok, "poisson " + num(poisson) + ", reconstruction " + num(reconstruction) +
                  ", div T " + num(transverse_div) + ", parseval " + num(parseval) +
                  ", erased gauss " + num(erased)};
}

// 8. Bit-identical CSV across repeated runs and thread counts.
Outcome determinism_check() {
  std::string detail;
  for (const char* name : {"acceptance_plasma.json", "wire_pair.json"}) {
    Scenario s = load_scenario(kData + "/" + name);
    s.integrator.n_steps = std::min<std::size_t>(s.integrator.n_steps, 200);
    const std::string stem = fs::path(name).stem().string();
    RunOptions four;
    four.threads = 4;
    const std::string a = slurp(run(s, scratch(stem + "_a")).trajectory_csv);
    const std::string b = slurp(run(s, scratch(stem + "_b")).trajectory_csv);
    const std::string c = slurp(run(s, scratch(stem + "_c"), four).trajectory_csv);
    if (a.empty() || a != b || a != c) return {false, std::string(name) + " differs"};
    detail += (detail.empty() ? "" : ", ") + stem + " " + std::to_string(a.size()) + " bytes";
  }
  return {true, detail + " identical (threads 1, 1, 4)"};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    Outcome (*fn)();
  };
  const Criterion criteria[] = {
      {"alfven current", alfven_current_check},
      {"W_magnetic in MeV range", w_magnetic_check},
      {"removal energy vs W", removal_consistency_check},
      {"gradient correctness", gradient_check},
      {"conservation", conservation_check},
      {"coulomb limit", coulomb_limit_check},
      {"field suite", field_check},
      {"determinism", determinism_check},
  };
  int failures = 0;
  int index = 1;
  for (const auto& c : criteria) {
    Outcome o;
    try {
      o = c.fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += o.pass ? 0 : 1;
    std::printf("%s %d %-26s %s\n", o.pass ? "PASS" : "FAIL", index++, c.name, o.detail.c_str());
  }
  return failures == 0 ? 0 : 1;
}
