#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "darwin/errors.hpp"
#include "darwin/field.hpp"
#include "darwin/grid_io.hpp"
#include "support/test_states.hpp"

using namespace darwin;
using test::rel_err;

namespace {

constexpr double kPi = std::numbers::pi;

GridShape cube(std::size_t n, double h = 0.1) { return GridShape{n, n, n, h}; }

ScalarGrid random_scalar(const GridShape& shape, std::uint64_t seed, bool zero_mean = true) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> d;
  ScalarGrid g(shape);
  for (auto& v : g.values) v = d(gen);
  if (zero_mean) {
    const double m = mean(g);
    for (auto& v : g.values) v -= m;
  }
  return g;
}

// Sum of random plane waves below Nyquist, so the first-derivative operators
// see all of its content.
ScalarGrid band_limited(const GridShape& shape, std::uint64_t seed, int modes = 24) {
  std::mt19937_64 gen(seed);
  std::uniform_int_distribution<int> mx(-static_cast<int>(shape.nx / 2) + 1,
                                        static_cast<int>(shape.nx / 2) - 1);
  std::uniform_int_distribution<int> my(-static_cast<int>(shape.ny / 2) + 1,
                                        static_cast<int>(shape.ny / 2) - 1);
  std::uniform_int_distribution<int> mz(-static_cast<int>(shape.nz / 2) + 1,
                                        static_cast<int>(shape.nz / 2) - 1);
  std::uniform_real_distribution<double> u(0.0, 2.0 * kPi);
  const Vec3 box = shape.box();
  ScalarGrid g(shape);
  for (int m = 0; m < modes; ++m) {
    Vec3 k(2.0 * kPi * mx(gen) / box.x(), 2.0 * kPi * my(gen) / box.y(),
           2.0 * kPi * mz(gen) / box.z());
    if (k.squaredNorm() == 0.0) k.x() = 2.0 * kPi / box.x();
    const double phase = u(gen);
    const double amp = 0.5 + u(gen) / (2.0 * kPi);
    for (std::size_t i = 0; i < shape.nx; ++i)
      for (std::size_t j = 0; j < shape.ny; ++j)
        for (std::size_t l = 0; l < shape.nz; ++l)
          g(i, j, l) += amp * std::cos(k.dot(shape.node_position(i, j, l)) + phase);
  }
  return g;
}

VectorGrid random_vector(const GridShape& shape, std::uint64_t seed) {
  VectorGrid f(shape);
  for (int c = 0; c < 3; ++c) f.components[c] = random_scalar(shape, seed + c, false).values;
  return f;
}

template <class Fn>
ScalarGrid sample(const GridShape& shape, Fn fn) {
  ScalarGrid g(shape);
  for (std::size_t i = 0; i < shape.nx; ++i)
    for (std::size_t j = 0; j < shape.ny; ++j)
      for (std::size_t k = 0; k < shape.nz; ++k) g(i, j, k) = fn(shape.node_position(i, j, k));
  return g;
}

double rms_diff(const VectorGrid& a, const VectorGrid& b) { return rms(a - b); }

}  // namespace

TEST_CASE("grid shape validation") {
  CHECK_NOTHROW(cube(8).validate());
  CHECK_THROWS_AS((GridShape{7, 8, 8, 0.1}.validate()), ValidationError);
  CHECK_THROWS_AS((GridShape{2, 8, 8, 0.1}.validate()), ValidationError);
  CHECK_THROWS_AS((GridShape{8, 8, 8, 0.0}.validate()), ValidationError);
}

TEST_CASE("poisson single mode") {
  const GridShape shape{16, 8, 12, 0.25};
  const Vec3 box = shape.box();
  const double kx = 2.0 * kPi * 3.0 / box.x();
  const double ky = 2.0 * kPi * 1.0 / box.y();
  const ScalarGrid rho =
      sample(shape, [&](const Vec3& x) { return std::sin(kx * x.x()) * std::cos(ky * x.y()); });
  const ScalarGrid phi = solve_poisson(rho);
  const double amp = 4.0 * kPi / (kx * kx + ky * ky);
  const ScalarGrid want = sample(
      shape, [&](const Vec3& x) { return amp * std::sin(kx * x.x()) * std::cos(ky * x.y()); });
  CHECK(rms(phi - want) / rms(want) < 1e-12);
  CHECK(std::abs(mean(phi)) < 1e-14 * amp);
  CHECK(poisson_residual(phi, rho) < 1e-12);
}

TEST_CASE("poisson random density") {
  const ScalarGrid rho = random_scalar(cube(16), 3);
  const ScalarGrid phi = solve_poisson(rho);
  CHECK(poisson_residual(phi, rho) < 1e-10);

  // Nyquist content is invisible to first derivatives: Gauss's law holds
  // only for the band-limited part.
  CHECK(gauss_law_residual(electric_field(phi), rho) > 1e-3);
  const ScalarGrid smooth = band_limited(rho.shape, 4);
  CHECK(gauss_law_residual(electric_field(solve_poisson(smooth)), smooth) < 1e-10);

  ScalarGrid charged = rho;
  for (auto& v : charged.values) v += 0.1;
  CHECK_THROWS_AS(solve_poisson(charged), NonzeroNetCharge);

  // Linear in rho.
  ScalarGrid twice = rho;
  for (auto& v : twice.values) v *= 2.0;
  ScalarGrid phi2 = solve_poisson(twice);
  for (auto& v : phi2.values) v *= 0.5;
  CHECK(rms(phi2 - phi) <= 1e-14 * rms(phi));
}

TEST_CASE("dipole potential is antisymmetric") {
  const GridShape shape = cube(16, 0.125);
  const double mid = 0.5 * shape.box().x();
  const std::vector<PointCharge> dipole{{1.0, Vec3(mid - 0.25, mid, mid)},
                                        {-1.0, Vec3(mid + 0.25, mid, mid)}};
  const ScalarGrid rho = deposit_charges(dipole, shape);
  double total = 0.0;
  for (double v : rho.values) total += v;
  CHECK(std::abs(total) < 1e-12 * rms(rho) * static_cast<double>(rho.values.size()));
  const ScalarGrid phi = solve_poisson(rho);
  const std::size_t c = 8;
  for (std::size_t d = 1; d < 8; ++d) {
    CHECK(phi(c - d, c, c) == doctest::Approx(-phi(c + d, c, c)).epsilon(1e-9));
  }
  CHECK(phi(c - 2, c, c) > 0.0);
}

TEST_CASE("deposit normalization") {
  const GridShape shape = cube(12, 0.2);
  const std::vector<PointCharge> q{{2.5, Vec3(0.3, 1.1, 2.3)}};
  const ScalarGrid rho = deposit_charges(q, shape, 0.3);
  double total = 0.0;
  for (double v : rho.values) total += v;
  const double h3 = std::pow(shape.spacing, 3);
  CHECK(rel_err(total * h3, 2.5) < 1e-13);
}

TEST_CASE("direct coulomb potential") {
  const std::vector<PointCharge> one{{3.0, Vec3(1, 2, 3)}};
  const std::vector<Vec3> at{Vec3(1, 2, 5), Vec3(4, 6, 3)};
  const auto phi = coulomb_potential_direct(one, at);
  CHECK(phi[0] == doctest::Approx(1.5));
  CHECK(phi[1] == doctest::Approx(0.6));

  const std::vector<PointCharge> pair{{2.0, Vec3(-1, 0, 0)}, {2.0, Vec3(1, 0, 0)}};
  const std::vector<Vec3> centre{Vec3::Zero()};
  CHECK(coulomb_potential_direct(pair, centre)[0] == doctest::Approx(4.0));

  const std::vector<Vec3> on{Vec3(1, 2, 3)};
  CHECK_THROWS_AS(coulomb_potential_direct(one, on), ValidationError);

  // Shell of equal charges looks like a point charge from outside.
  std::vector<PointCharge> shell;
  const int n = 400;
  const double golden = kPi * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < n; ++i) {
    const double z = 1.0 - 2.0 * (i + 0.5) / n;
    const double r = std::sqrt(1.0 - z * z);
    shell.push_back({1.0 / n, Vec3(r * std::cos(golden * i), r * std::sin(golden * i), z)});
  }
  const std::vector<Vec3> far{Vec3(0, 0, 5), Vec3(3, 4, 0), Vec3(-2, 2, 2)};
  const auto out = coulomb_potential_direct(shell, far);
  for (std::size_t i = 0; i < far.size(); ++i) {
    CHECK(rel_err(out[i], 1.0 / far[i].norm()) < 1e-3);
  }
}

TEST_CASE("helmholtz on pure fields") {
  const GridShape shape = cube(16);
  const VectorGrid grad = gradient(random_scalar(shape, 5));
  const DecomposedField g = helmholtz_decompose(grad);
  CHECK(rms(g.transverse) < 1e-12 * rms(grad));
  CHECK(rms_diff(g.longitudinal, grad) < 1e-12 * rms(grad));

  const VectorGrid rot = curl(random_vector(shape, 9));
  const DecomposedField r = helmholtz_decompose(rot);
  CHECK(rms(r.longitudinal) < 1e-12 * rms(rot));
  CHECK(relative_divergence(rot) < 1e-12);

  // A uniform field has no longitudinal part.
  VectorGrid uniform(shape);
  for (auto& v : uniform.components[1]) v = 2.0;
  const DecomposedField u = helmholtz_decompose(uniform);
  CHECK(rms(u.longitudinal) < 1e-14);
}

TEST_CASE("helmholtz projection properties") {
  const GridShape shape{8, 12, 10, 0.3};
  const VectorGrid f = random_vector(shape, 21);
  const DecomposedField d = helmholtz_decompose(f);
  CHECK(rms_diff(d.longitudinal + d.transverse, f) < 1e-13 * rms(f));
  CHECK(relative_divergence(d.transverse) < 1e-12);
  CHECK(rms(curl(d.longitudinal)) < 1e-11 * rms(curl(f)));

  const DecomposedField again = helmholtz_decompose(d.longitudinal);
  CHECK(rms_diff(again.longitudinal, d.longitudinal) < 1e-13 * rms(d.longitudinal));
  CHECK(rms(again.transverse) < 1e-13 * rms(d.longitudinal));

  const VectorGrid g = random_vector(shape, 40);
  const DecomposedField dg = helmholtz_decompose(g);
  const DecomposedField sum = helmholtz_decompose(f + 3.0 * g);
  CHECK(rms_diff(sum.longitudinal, d.longitudinal + 3.0 * dg.longitudinal) <
        1e-12 * rms(sum.longitudinal));
}

TEST_CASE("parseval split") {
  const VectorGrid f = random_vector(cube(8), 50);
  const MeanSquareSplit s = mean_square_field_split(f);
  CHECK(rel_err(s.longitudinal + s.transverse, s.total) < 1e-12);
  double direct = 0.0;
  for (const auto& c : f.components)
    for (double v : c) direct += v * v;
  CHECK(rel_err(s.total, direct / static_cast<double>(f.components[0].size())) < 1e-13);
}

TEST_CASE("equal longitudinal and transverse parts") {
  const GridShape shape = cube(16, 0.2);
  const double k = 2.0 * kPi * 2.0 / shape.box().x();
  VectorGrid e(shape);
  e.components[0] = sample(shape, [&](const Vec3& x) { return std::cos(k * x.x()); }).values;
  e.components[1] = sample(shape, [&](const Vec3& x) { return std::cos(k * x.x()); }).values;
  const MeanSquareSplit s = mean_square_field_split(e);
  CHECK(s.transverse_share() == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(s.longitudinal == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("split is invariant under axis relabelling") {
  const GridShape shape = cube(8);
  const VectorGrid f = random_vector(shape, 60);
  // (x, y, z) -> (y, z, x) for both node index and component.
  VectorGrid p(shape);
  for (std::size_t i = 0; i < 8; ++i)
    for (std::size_t j = 0; j < 8; ++j)
      for (std::size_t k = 0; k < 8; ++k)
        for (int c = 0; c < 3; ++c)
          p.components[(c + 2) % 3][shape.index(j, k, i)] = f.components[c][shape.index(i, j, k)];
  const MeanSquareSplit a = mean_square_field_split(f);
  const MeanSquareSplit b = mean_square_field_split(p);
  CHECK(rel_err(a.transverse, b.transverse) < 1e-12);
  CHECK(rel_err(a.longitudinal, b.longitudinal) < 1e-12);
}

TEST_CASE("gauss law residual") {
  const GridShape shape = cube(16, 0.1);
  const ScalarGrid rho = band_limited(shape, 70);
  const VectorGrid e = electric_field(solve_poisson(rho));
  CHECK(gauss_law_residual(e, rho) < 1e-10);

  const DecomposedField d = helmholtz_decompose(e);
  CHECK(gauss_law_residual(d.transverse, rho) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(gauss_law_residual(d.longitudinal, rho) < 1e-10);

  const ScalarGrid none(shape);
  CHECK(gauss_law_residual(curl(random_vector(shape, 71)), none) < 1e-10);
}

TEST_CASE("grid file round trip") {
  const GridShape shape{4, 6, 8, 0.5};
  FieldGridFile file;
  file.shape = shape;
  file.density = random_scalar(shape, 80);
  file.field = random_vector(shape, 81);
  std::stringstream buf;
  write_grid(buf, file);
  CHECK(buf.str().size() == 40 + 8 * 4 * shape.nodes());
  const FieldGridFile back = read_grid(buf);
  CHECK(back.shape == shape);
  REQUIRE(back.density);
  REQUIRE(back.field);
  CHECK(back.density->values == file.density->values);
  for (int c = 0; c < 3; ++c) CHECK(back.field->components[c] == file.field->components[c]);

  std::stringstream truncated(buf.str().substr(0, 100));
  CHECK_THROWS_AS(read_grid(truncated), ValidationError);
}

TEST_CASE("analysis of a density-only grid") {
  const GridShape shape = cube(16, 0.1);
  FieldGridFile file;
  file.shape = shape;
  file.density = band_limited(shape, 90);
  const FieldAnalysis a = analyze_field_grid(file);
  CHECK(a.field_from_density);
  REQUIRE(a.gauss_law_residual);
  CHECK(*a.gauss_law_residual < 1e-10);
  REQUIRE(a.erased_longitudinal_gauss_residual);
  CHECK(*a.erased_longitudinal_gauss_residual == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(a.reconstruction_error < 1e-13);
  CHECK(a.transverse_divergence < 1e-12);
  CHECK(a.parseval_defect < 1e-12);
  CHECK(field_analysis_csv(a).rfind("metric,value\n", 0) == 0);
}
