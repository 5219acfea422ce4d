#include "darwin/field.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "darwin/errors.hpp"
#include "spectral.hpp"

namespace darwin {

namespace {

using detail::Complex;
using detail::SpectralBuffer;

constexpr double kFourPi = 4.0 * std::numbers::pi;
const Complex kI(0.0, 1.0);

void require_same_shape(const GridShape& a, const GridShape& b) {
  if (!(a == b)) throw GridMismatch("grid shapes differ");
}

std::array<SpectralBuffer, 3> forward_vector(const VectorGrid& f) {
  return {detail::forward(f.shape, f.components[0]), detail::forward(f.shape, f.components[1]),
          detail::forward(f.shape, f.components[2])};
}

VectorGrid inverse_vector(const GridShape& shape, std::array<SpectralBuffer, 3> spectra) {
  VectorGrid out(shape);
  for (int c = 0; c < 3; ++c) out.components[c] = detail::inverse(shape, std::move(spectra[c]));
  return out;
}

}  // namespace

void GridShape::validate() const {
  for (std::size_t n : {nx, ny, nz}) {
    if (n < 4 || n % 2 != 0) {
      throw ValidationError("grid dimensions must be even and >= 4");
    }
  }
  if (!std::isfinite(spacing) || spacing <= 0.0) {
    throw ValidationError("grid spacing must be > 0");
  }
}

ScalarGrid operator-(const ScalarGrid& a, const ScalarGrid& b) {
  require_same_shape(a.shape, b.shape);
  ScalarGrid out(a.shape);
  for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] = a.values[i] - b.values[i];
  return out;
}

VectorGrid operator+(const VectorGrid& a, const VectorGrid& b) {
  require_same_shape(a.shape, b.shape);
  VectorGrid out(a.shape);
  for (int c = 0; c < 3; ++c) {
    for (std::size_t i = 0; i < a.shape.nodes(); ++i) {
      out.components[c][i] = a.components[c][i] + b.components[c][i];
    }
  }
  return out;
}

VectorGrid operator-(const VectorGrid& a, const VectorGrid& b) {
  require_same_shape(a.shape, b.shape);
  VectorGrid out(a.shape);
  for (int c = 0; c < 3; ++c) {
    for (std::size_t i = 0; i < a.shape.nodes(); ++i) {
      out.components[c][i] = a.components[c][i] - b.components[c][i];
    }
  }
  return out;
}

VectorGrid operator*(double s, const VectorGrid& a) {
  VectorGrid out(a.shape);
  for (int c = 0; c < 3; ++c) {
    for (std::size_t i = 0; i < a.shape.nodes(); ++i) out.components[c][i] = s * a.components[c][i];
  }
  return out;
}

double rms(const ScalarGrid& g) {
  double sum = 0.0;
  for (double v : g.values) sum += v * v;
  return g.values.empty() ? 0.0 : std::sqrt(sum / static_cast<double>(g.values.size()));
}

namespace {

double mean_square(const VectorGrid& g) {
  const std::size_t n = g.shape.nodes();
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (int c = 0; c < 3; ++c) sum += g.components[c][i] * g.components[c][i];
  }
  return n == 0 ? 0.0 : sum / static_cast<double>(n);
}

}  // namespace

double rms(const VectorGrid& g) { return std::sqrt(mean_square(g)); }

double mean(const ScalarGrid& g) {
  double sum = 0.0;
  for (double v : g.values) sum += v;
  return g.values.empty() ? 0.0 : sum / static_cast<double>(g.values.size());
}

ScalarGrid laplacian(const ScalarGrid& f) {
  f.shape.validate();
  SpectralBuffer s = detail::forward(f.shape, f.values);
  detail::for_each_mode_k2(f.shape, [&](std::size_t idx, double k2) { s[idx] *= -k2; });
  ScalarGrid out(f.shape);
  out.values = detail::inverse(f.shape, std::move(s));
  return out;
}

VectorGrid gradient(const ScalarGrid& f) {
  f.shape.validate();
  const SpectralBuffer s = detail::forward(f.shape, f.values);
  std::array<SpectralBuffer, 3> g{SpectralBuffer(s.size()), SpectralBuffer(s.size()),
                                  SpectralBuffer(s.size())};
  detail::for_each_mode(f.shape, [&](std::size_t idx, double kx, double ky, double kz) {
    const Complex ik = kI * s[idx];
    g[0][idx] = kx * ik;
    g[1][idx] = ky * ik;
    g[2][idx] = kz * ik;
  });
  return inverse_vector(f.shape, std::move(g));
}

ScalarGrid divergence(const VectorGrid& f) {
  f.shape.validate();
  auto s = forward_vector(f);
  detail::for_each_mode(f.shape, [&](std::size_t idx, double kx, double ky, double kz) {
    s[0][idx] = kI * (kx * s[0][idx] + ky * s[1][idx] + kz * s[2][idx]);
  });
  ScalarGrid out(f.shape);
  out.values = detail::inverse(f.shape, std::move(s[0]));
  return out;
}

VectorGrid curl(const VectorGrid& f) {
  f.shape.validate();
  auto s = forward_vector(f);
  detail::for_each_mode(f.shape, [&](std::size_t idx, double kx, double ky, double kz) {
    const Complex fx = s[0][idx], fy = s[1][idx], fz = s[2][idx];
    s[0][idx] = kI * (ky * fz - kz * fy);
    s[1][idx] = kI * (kz * fx - kx * fz);
    s[2][idx] = kI * (kx * fy - ky * fx);
  });
  return inverse_vector(f.shape, std::move(s));
}

double relative_divergence(const VectorGrid& f) {
  const double scale = rms(f) * std::numbers::pi / f.shape.spacing;
  const double div = rms(divergence(f));
  return scale > 0.0 ? div / scale : div;
}

ScalarGrid solve_poisson(const ScalarGrid& rho) {
  rho.shape.validate();
  double peak = 0.0;
  for (double v : rho.values) peak = std::max(peak, std::abs(v));
  const double net = mean(rho);
  if (std::abs(net) > 1e-12 * peak) {
    throw NonzeroNetCharge("periodic Poisson problem needs zero net charge (mean density " +
                           std::to_string(net) + ", peak " + std::to_string(peak) + ")");
  }
  SpectralBuffer s = detail::forward(rho.shape, rho.values);
  detail::for_each_mode_k2(rho.shape, [&](std::size_t idx, double k2) {
    s[idx] = k2 > 0.0 ? s[idx] * (kFourPi / k2) : Complex(0.0, 0.0);
  });
  ScalarGrid phi(rho.shape);
  phi.values = detail::inverse(rho.shape, std::move(s));
  return phi;
}

double poisson_residual(const ScalarGrid& phi, const ScalarGrid& rho) {
  require_same_shape(phi.shape, rho.shape);
  ScalarGrid lhs = laplacian(phi);
  ScalarGrid source(rho.shape);
  for (std::size_t i = 0; i < source.values.size(); ++i) source.values[i] = kFourPi * rho.values[i];
  for (std::size_t i = 0; i < lhs.values.size(); ++i) lhs.values[i] += source.values[i];
  const double denom = rms(source);
  return denom > 0.0 ? rms(lhs) / denom : rms(lhs);
}

VectorGrid electric_field(const ScalarGrid& phi) { return -1.0 * gradient(phi); }

std::vector<double> coulomb_potential_direct(std::span<const PointCharge> charges,
                                             std::span<const Vec3> points) {
  std::vector<double> out;
  out.reserve(points.size());
  for (const Vec3& x : points) {
    double phi = 0.0;
    for (const PointCharge& q : charges) {
      const double d = (x - q.position).norm();
      if (d == 0.0) {
        throw ValidationError("potential evaluated at the location of a point charge");
      }
      phi += q.charge / d;
    }
    out.push_back(phi);
  }
  return out;
}

ScalarGrid deposit_charges(std::span<const PointCharge> charges, const GridShape& shape,
                           std::optional<double> width) {
  shape.validate();
  const double sigma = width.value_or(2.0 * shape.spacing);
  if (!(sigma > 0.0)) throw ValidationError("deposition width must be > 0");
  const double cell_volume = shape.spacing * shape.spacing * shape.spacing;

  // Periodic Gaussian along one axis, summed over enough images that the
  // dropped tail is below rounding.
  const auto profile = [&](double x, std::size_t n) {
    const double length = shape.spacing * static_cast<double>(n);
    const int images = static_cast<int>(std::ceil(10.0 * sigma / length)) + 1;
    std::vector<double> w(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const double d = shape.spacing * static_cast<double>(i) - x;
      for (int m = -images; m <= images; ++m) {
        const double e = d - length * m;
        w[i] += std::exp(-0.5 * e * e / (sigma * sigma));
      }
    }
    double total = 0.0;
    for (double v : w) total += v;
    for (double& v : w) v /= total;
    return w;
  };

  ScalarGrid rho(shape);
  for (const PointCharge& q : charges) {
    const std::vector<double> wx = profile(q.position.x(), shape.nx);
    const std::vector<double> wy = profile(q.position.y(), shape.ny);
    const std::vector<double> wz = profile(q.position.z(), shape.nz);
    const double scale = q.charge / cell_volume;
    for (std::size_t i = 0; i < shape.nx; ++i) {
      for (std::size_t j = 0; j < shape.ny; ++j) {
        const double wij = scale * wx[i] * wy[j];
        for (std::size_t k = 0; k < shape.nz; ++k) rho(i, j, k) += wij * wz[k];
      }
    }
  }
  return rho;
}

std::vector<PointCharge> point_charges(const SystemState& state) {
  std::vector<PointCharge> out;
  out.reserve(state.size());
  for (const auto& p : state.particles) out.push_back({p.charge, p.position});
  return out;
}

DecomposedField helmholtz_decompose(const VectorGrid& field) {
  field.shape.validate();
  auto s = forward_vector(field);
  std::array<SpectralBuffer, 3> lon{SpectralBuffer(s[0].size()), SpectralBuffer(s[0].size()),
                                    SpectralBuffer(s[0].size())};
  detail::for_each_mode(field.shape, [&](std::size_t idx, double kx, double ky, double kz) {
    const double k2 = kx * kx + ky * ky + kz * kz;
    if (k2 == 0.0) {
      for (auto& l : lon) l[idx] = Complex(0.0, 0.0);
      return;
    }
    const Complex proj = (kx * s[0][idx] + ky * s[1][idx] + kz * s[2][idx]) / k2;
    lon[0][idx] = kx * proj;
    lon[1][idx] = ky * proj;
    lon[2][idx] = kz * proj;
    s[0][idx] -= lon[0][idx];
    s[1][idx] -= lon[1][idx];
    s[2][idx] -= lon[2][idx];
  });
  return DecomposedField{inverse_vector(field.shape, std::move(lon)),
                         inverse_vector(field.shape, std::move(s))};
}

double gauss_law_residual(const VectorGrid& e, const ScalarGrid& rho) {
  require_same_shape(e.shape, rho.shape);
  ScalarGrid div = divergence(e);
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < div.values.size(); ++i) {
    const double source = kFourPi * rho.values[i];
    const double r = div.values[i] - source;
    num += r * r;
    den += source * source;
  }
  if (den == 0.0) return rms(div);
  return std::sqrt(num / den);
}

MeanSquareSplit mean_square_field_split(const VectorGrid& e) {
  const DecomposedField parts = helmholtz_decompose(e);
  return MeanSquareSplit{mean_square(parts.longitudinal), mean_square(parts.transverse),
                         mean_square(e)};
}

}  // namespace darwin
