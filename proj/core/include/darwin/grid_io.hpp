#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "darwin/field.hpp"

namespace darwin {

// Binary grid file, all values little-endian:
//
//   u64 nx, u64 ny, u64 nz, u64 ncomp, f64 spacing_cm
//   f64 samples[nx][ny][nz][ncomp]   (row-major, last index fastest)
//
// ncomp = 1: charge density rho (statC/cm^3)
// ncomp = 3: vector field (Ex, Ey, Ez) (statV/cm)
// ncomp = 4: (Ex, Ey, Ez, rho)

struct FieldGridFile {
  GridShape shape;
  std::optional<ScalarGrid> density;
  std::optional<VectorGrid> field;
};

FieldGridFile read_grid(std::istream& in);
FieldGridFile read_grid_file(const std::filesystem::path& path);
void write_grid(std::ostream& out, const FieldGridFile& grid);
void write_grid_file(const std::filesystem::path& path, const FieldGridFile& grid);

struct FieldAnalysis {
  GridShape shape;
  bool has_density = false;
  bool field_from_density = false;  // E was derived as -grad(phi)
  std::optional<double> poisson_residual;
  std::optional<double> gauss_law_residual;
  /// Gauss residual of the transverse part alone: what remains of the
  /// field once its longitudinal (Coulomb) part is discarded.
  std::optional<double> erased_longitudinal_gauss_residual;
  double reconstruction_error = 0.0;       // rms(L + T - E) / rms(E)
  double transverse_divergence = 0.0;      // rms(div T) / (rms(E) pi / h)
  MeanSquareSplit mean_square;
  double parseval_defect = 0.0;            // |<L^2> + <T^2> - <E^2>| / <E^2>
};

FieldAnalysis analyze_field_grid(const FieldGridFile& grid);

/// One `metric,value` row per quantity, header first.
std::string field_analysis_csv(const FieldAnalysis& analysis);
std::string field_analysis_text(const FieldAnalysis& analysis);

}  // namespace darwin
