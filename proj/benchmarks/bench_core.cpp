#include <random>

#include <benchmark/benchmark.h>

#include "darwin/dynamics.hpp"
#include "darwin/field.hpp"
#include "darwin/lagrangian.hpp"

using namespace darwin;

namespace {

// Well-separated random state in dimensionless units (c = 10).
SystemState make_state(std::size_t n) {
  std::mt19937_64 gen(42);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  SystemState s;
  const double side = std::cbrt(static_cast<double>(n));
  while (s.particles.size() < n) {
    const Vec3 x = side * Vec3(u(gen), u(gen), u(gen));
    bool clear = true;
    for (const auto& p : s.particles) clear = clear && (p.position - x).norm() > 0.3;
    if (!clear) continue;
    const double q = s.particles.size() % 2 == 0 ? 1.0 : -1.0;
    s.particles.push_back({static_cast<std::int64_t>(s.particles.size()), q, 1.0, x,
                           0.5 * Vec3(u(gen), u(gen), u(gen))});
  }
  return s;
}

InteractionParams params(unsigned threads = 1) {
  InteractionParams p;
  p.c = 10.0;
  p.softening = 0.05;
  p.threads = threads;
  return p;
}

void BM_MassMatrix(benchmark::State& st) {
  const SystemState s = make_state(static_cast<std::size_t>(st.range(0)));
  const auto p = params();
  for (auto _ : st) benchmark::DoNotOptimize(assemble_mass_matrix(s, p));
}
BENCHMARK(BM_MassMatrix)->Arg(8)->Arg(32)->Arg(128);

void BM_VelocitySolve(benchmark::State& st) {
  const SystemState s = make_state(static_cast<std::size_t>(st.range(0)));
  const auto p = params();
  const Eigen::VectorXd mom = generalized_momenta(s, p);
  SolverOptions opts;
  opts.kind = st.range(1) == 0 ? LinearSolverKind::cholesky : LinearSolverKind::conjugate_gradient;
  for (auto _ : st) benchmark::DoNotOptimize(velocities_from_momenta(s, p, mom, opts));
}
BENCHMARK(BM_VelocitySolve)->ArgsProduct({{8, 32, 128}, {0, 1}});

void BM_PositionGradient(benchmark::State& st) {
  const SystemState s = make_state(static_cast<std::size_t>(st.range(0)));
  const auto p = params(static_cast<unsigned>(st.range(1)));
  for (auto _ : st) benchmark::DoNotOptimize(lagrangian_position_gradient(s, p));
}
BENCHMARK(BM_PositionGradient)->ArgsProduct({{8, 128, 512}, {1, 4}});

void BM_Step(benchmark::State& st) {
  const SystemState s = make_state(static_cast<std::size_t>(st.range(0)));
  const auto p = params();
  IntegratorConfig c;
  c.dt = 1e-3;
  c.n_steps = 1;
  for (auto _ : st) benchmark::DoNotOptimize(step(s, p, c));
}
BENCHMARK(BM_Step)->Arg(8)->Arg(32);

void BM_Poisson(benchmark::State& st) {
  const auto n = static_cast<std::size_t>(st.range(0));
  const GridShape shape{n, n, n, 0.1};
  ScalarGrid rho(shape);
  std::mt19937_64 gen(1);
  std::normal_distribution<double> d;
  double sum = 0.0;
  for (double& v : rho.values) sum += (v = d(gen));
  for (double& v : rho.values) v -= sum / static_cast<double>(rho.values.size());
  for (auto _ : st) benchmark::DoNotOptimize(solve_poisson(rho));
}
BENCHMARK(BM_Poisson)->Arg(16)->Arg(32)->Arg(64);

void BM_Helmholtz(benchmark::State& st) {
  const auto n = static_cast<std::size_t>(st.range(0));
  VectorGrid f(GridShape{n, n, n, 0.1});
  std::mt19937_64 gen(2);
  std::normal_distribution<double> d;
  for (auto& c : f.components)
    for (double& v : c) v = d(gen);
  for (auto _ : st) benchmark::DoNotOptimize(helmholtz_decompose(f));
}
BENCHMARK(BM_Helmholtz)->Arg(16)->Arg(32);

}  // namespace

BENCHMARK_MAIN();
