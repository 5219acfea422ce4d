#include "darwin/grid_io.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>

#include "darwin/errors.hpp"

namespace darwin {

namespace {

std::uint64_t to_little_endian(std::uint64_t v) {
  if constexpr (std::endian::native == std::endian::little) {
    return v;
  } else {
    std::uint64_t out = 0;
    for (int i = 0; i < 8; ++i) out |= ((v >> (8 * i)) & 0xffu) << (8 * (7 - i));
    return out;
  }
}

void put_u64(std::ostream& out, std::uint64_t v) {
  const std::uint64_t le = to_little_endian(v);
  out.write(reinterpret_cast<const char*>(&le), sizeof le);
}

void put_f64(std::ostream& out, double v) { put_u64(out, std::bit_cast<std::uint64_t>(v)); }

std::uint64_t get_u64(std::istream& in) {
  std::uint64_t le = 0;
  if (!in.read(reinterpret_cast<char*>(&le), sizeof le)) {
    throw ValidationError("grid file truncated");
  }
  return to_little_endian(le);
}

double get_f64(std::istream& in) { return std::bit_cast<double>(get_u64(in)); }

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

FieldGridFile read_grid(std::istream& in) {
  FieldGridFile grid;
  constexpr std::uint64_t kMaxDim = 1u << 12;
  const std::uint64_t nx = get_u64(in), ny = get_u64(in), nz = get_u64(in);
  const std::uint64_t ncomp = get_u64(in);
  const double h = get_f64(in);
  if (nx > kMaxDim || ny > kMaxDim || nz > kMaxDim) {
    throw ValidationError("grid file dimensions are implausibly large");
  }
  grid.shape = GridShape{nx, ny, nz, h};
  grid.shape.validate();
  if (ncomp != 1 && ncomp != 3 && ncomp != 4) {
    throw ValidationError("grid file component count must be 1, 3 or 4");
  }
  const bool has_field = ncomp >= 3;
  const bool has_density = ncomp != 3;
  if (has_field) grid.field.emplace(grid.shape);
  if (has_density) grid.density.emplace(grid.shape);
  for (std::size_t n = 0; n < grid.shape.nodes(); ++n) {
    if (has_field) {
      for (int c = 0; c < 3; ++c) grid.field->components[c][n] = get_f64(in);
    }
    if (has_density) grid.density->values[n] = get_f64(in);
  }
  return grid;
}

FieldGridFile read_grid_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open grid file '" + path.string() + "'");
  return read_grid(in);
}

void write_grid(std::ostream& out, const FieldGridFile& grid) {
  if (!grid.field && !grid.density) throw ValidationError("grid file has no samples to write");
  const std::uint64_t ncomp = (grid.field ? 3 : 0) + (grid.density ? 1 : 0);
  put_u64(out, grid.shape.nx);
  put_u64(out, grid.shape.ny);
  put_u64(out, grid.shape.nz);
  put_u64(out, ncomp);
  put_f64(out, grid.shape.spacing);
  for (std::size_t n = 0; n < grid.shape.nodes(); ++n) {
    if (grid.field) {
      for (int c = 0; c < 3; ++c) put_f64(out, grid.field->components[c][n]);
    }
    if (grid.density) put_f64(out, grid.density->values[n]);
  }
}

void write_grid_file(const std::filesystem::path& path, const FieldGridFile& grid) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ValidationError("cannot write grid file '" + path.string() + "'");
  write_grid(out, grid);
}

FieldAnalysis analyze_field_grid(const FieldGridFile& grid) {
  grid.shape.validate();
  FieldAnalysis a;
  a.shape = grid.shape;
  a.has_density = grid.density.has_value();

  VectorGrid e(grid.shape);
  if (grid.field) {
    e = *grid.field;
  } else if (grid.density) {
    const ScalarGrid phi = solve_poisson(*grid.density);
    a.poisson_residual = poisson_residual(phi, *grid.density);
    e = electric_field(phi);
    a.field_from_density = true;
  } else {
    throw ValidationError("grid file carries neither density nor field samples");
  }

  const DecomposedField parts = helmholtz_decompose(e);
  const double e_rms = rms(e);
  const double recon = rms(parts.longitudinal + parts.transverse - e);
  a.reconstruction_error = e_rms > 0.0 ? recon / e_rms : recon;
  // Measured against the full field: T alone may be pure rounding noise.
  const double div_scale = e_rms * std::numbers::pi / e.shape.spacing;
  const double div_t = rms(divergence(parts.transverse));
  a.transverse_divergence = div_scale > 0.0 ? div_t / div_scale : div_t;
  a.mean_square = mean_square_field_split(e);
  const double defect =
      std::abs(a.mean_square.longitudinal + a.mean_square.transverse - a.mean_square.total);
  a.parseval_defect = a.mean_square.total > 0.0 ? defect / a.mean_square.total : defect;

  if (grid.density) {
    a.gauss_law_residual = gauss_law_residual(e, *grid.density);
    a.erased_longitudinal_gauss_residual = gauss_law_residual(parts.transverse, *grid.density);
  }
  return a;
}

std::string field_analysis_csv(const FieldAnalysis& a) {
  std::ostringstream out;
  out << "metric,value\n";
  auto row = [&](const char* name, double v) { out << name << ',' << format_double(v) << '\n'; };
  row("nx", static_cast<double>(a.shape.nx));
  row("ny", static_cast<double>(a.shape.ny));
  row("nz", static_cast<double>(a.shape.nz));
  row("spacing_cm", a.shape.spacing);
  if (a.poisson_residual) row("poisson_residual", *a.poisson_residual);
  if (a.gauss_law_residual) row("gauss_law_residual", *a.gauss_law_residual);
  if (a.erased_longitudinal_gauss_residual) {
    row("erased_longitudinal_gauss_residual", *a.erased_longitudinal_gauss_residual);
  }
  row("reconstruction_error", a.reconstruction_error);
  row("transverse_divergence", a.transverse_divergence);
  row("mean_square_longitudinal", a.mean_square.longitudinal);
  row("mean_square_transverse", a.mean_square.transverse);
  row("mean_square_total", a.mean_square.total);
  row("transverse_share", a.mean_square.transverse_share());
  row("parseval_defect", a.parseval_defect);
  return out.str();
}

std::string field_analysis_text(const FieldAnalysis& a) {
  std::ostringstream out;
  char line[160];
  auto row = [&](const char* name, double v) {
    std::snprintf(line, sizeof line, "  %-36s %.6e\n", name, v);
    out << line;
  };
  std::snprintf(line, sizeof line, "grid %zux%zux%zu, h = %.6e cm%s\n", a.shape.nx, a.shape.ny,
                a.shape.nz, a.shape.spacing,
                a.field_from_density ? " (E = -grad phi from density)" : "");
  out << line;
  if (a.poisson_residual) row("poisson residual", *a.poisson_residual);
  if (a.gauss_law_residual) row("gauss-law residual", *a.gauss_law_residual);
  if (a.erased_longitudinal_gauss_residual) {
    row("gauss-law residual, transverse only", *a.erased_longitudinal_gauss_residual);
  }
  row("helmholtz reconstruction error", a.reconstruction_error);
  row("transverse divergence (relative)", a.transverse_divergence);
  row("<|E_long|^2>", a.mean_square.longitudinal);
  row("<|E_trans|^2>", a.mean_square.transverse);
  row("<|E|^2>", a.mean_square.total);
  row("transverse share", a.mean_square.transverse_share());
  row("parseval defect", a.parseval_defect);
  return out.str();
}

}  // namespace darwin
