#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "darwin/particles.hpp"

namespace darwin {

// Periodic spectral electrostatics on a uniform grid. First derivatives
// (grad, div, curl) use the wavevector k_eff = 2 pi m / (n h) with the
// Nyquist component set to zero, so the longitudinal/transverse projection
// is exact per mode. The Laplacian keeps the full |k|^2, Nyquist included,
// so Poisson solves are exact for any zero-mean density. The two agree
// except on Nyquist planes: Gauss's law for E = -grad(phi) holds exactly
// only for densities without Nyquist content.

struct GridShape {
  std::size_t nx = 0;
  std::size_t ny = 0;
  std::size_t nz = 0;
  double spacing = 0.0;  // h, cm

  std::size_t nodes() const { return nx * ny * nz; }
  std::size_t index(std::size_t i, std::size_t j, std::size_t k) const {
    return (i * ny + j) * nz + k;
  }
  Vec3 box() const {
    return {spacing * static_cast<double>(nx), spacing * static_cast<double>(ny),
            spacing * static_cast<double>(nz)};
  }
  Vec3 node_position(std::size_t i, std::size_t j, std::size_t k) const {
    return {spacing * static_cast<double>(i), spacing * static_cast<double>(j),
            spacing * static_cast<double>(k)};
  }
  /// Every dimension >= 4 and even, spacing > 0. Throws ValidationError.
  void validate() const;

  bool operator==(const GridShape&) const = default;
};

struct ScalarGrid {
  GridShape shape;
  std::vector<double> values;

  explicit ScalarGrid(GridShape s = {}) : shape(s), values(s.nodes(), 0.0) {}
  double& operator()(std::size_t i, std::size_t j, std::size_t k) {
    return values[shape.index(i, j, k)];
  }
  double operator()(std::size_t i, std::size_t j, std::size_t k) const {
    return values[shape.index(i, j, k)];
  }
};

struct VectorGrid {
  GridShape shape;
  std::array<std::vector<double>, 3> components;

  explicit VectorGrid(GridShape s = {})
      : shape(s),
        components{std::vector<double>(s.nodes(), 0.0), std::vector<double>(s.nodes(), 0.0),
                   std::vector<double>(s.nodes(), 0.0)} {}
};

// Pointwise helpers.
ScalarGrid operator-(const ScalarGrid& a, const ScalarGrid& b);
VectorGrid operator+(const VectorGrid& a, const VectorGrid& b);
VectorGrid operator-(const VectorGrid& a, const VectorGrid& b);
VectorGrid operator*(double s, const VectorGrid& a);

/// Root-mean-square over nodes.
double rms(const ScalarGrid& g);
/// sqrt(<|F|^2>) over nodes.
double rms(const VectorGrid& g);
double mean(const ScalarGrid& g);

ScalarGrid laplacian(const ScalarGrid& f);
VectorGrid gradient(const ScalarGrid& f);
ScalarGrid divergence(const VectorGrid& f);
VectorGrid curl(const VectorGrid& f);

/// rms(div F) / (rms(F) * pi / h): divergence measured against the largest
/// resolvable wavenumber, so the result is dimensionless and scale-free.
double relative_divergence(const VectorGrid& f);

/// Solves -lap(phi) = 4 pi rho with zero-mean phi. Throws NonzeroNetCharge
/// unless |mean rho| <= 1e-12 max|rho|.
ScalarGrid solve_poisson(const ScalarGrid& rho);

/// rms(lap(phi) + 4 pi rho) / rms(4 pi rho); absolute when rho vanishes.
double poisson_residual(const ScalarGrid& phi, const ScalarGrid& rho);

/// E = -grad(phi).
VectorGrid electric_field(const ScalarGrid& phi);

struct PointCharge {
  double charge = 0.0;  // statC
  Vec3 position = Vec3::Zero();
};

/// Phi(x) = sum_i q_i / |x - x_i| summed in input order. Throws
/// ValidationError when an evaluation point sits on a charge.
std::vector<double> coulomb_potential_direct(std::span<const PointCharge> charges,
                                             std::span<const Vec3> points);

/// Deposits point charges with a periodic Gaussian of standard deviation
/// `width` (default 2h when unset). Each charge's weights are normalized on
/// the grid, so sum(rho) h^3 equals the total charge to rounding.
ScalarGrid deposit_charges(std::span<const PointCharge> charges, const GridShape& shape,
                           std::optional<double> width = std::nullopt);

std::vector<PointCharge> point_charges(const SystemState& state);

struct DecomposedField {
  VectorGrid longitudinal;  // curl-free
  VectorGrid transverse;    // divergence-free; carries the k = 0 mode
};

/// Spectral projection: longitudinal = k (k.F) / |k|^2, transverse = rest.
/// Modes with k_eff = 0 (including the mean) go to the transverse part.
DecomposedField helmholtz_decompose(const VectorGrid& field);

/// rms(div E - 4 pi rho) / rms(4 pi rho); absolute rms(div E) if rho vanishes.
double gauss_law_residual(const VectorGrid& e, const ScalarGrid& rho);

struct MeanSquareSplit {
  double longitudinal = 0.0;  // <|E_long|^2>
  double transverse = 0.0;    // <|E_trans|^2>
  double total = 0.0;         // <|E|^2>

  double transverse_share() const { return total > 0.0 ? transverse / total : 0.0; }
};

MeanSquareSplit mean_square_field_split(const VectorGrid& e);

}  // namespace darwin
