#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "osm/forward.hpp"
#include "osm/specfun.hpp"

namespace osm {

/// Uniform lattice of cell centers over [x_min, x_max] x [y_min, y_max].
struct ImagingGrid {
  double x_min = -0.1;
  double x_max = 0.1;
  double y_min = -0.1;
  double y_max = 0.1;
  int nx = 64;
  int ny = 64;

  void validate() const;
  double dx() const { return (x_max - x_min) / nx; }
  double dy() const { return (y_max - y_min) / ny; }
  double cell_diagonal() const { return std::hypot(dx(), dy()); }
  std::size_t size() const { return static_cast<std::size_t>(nx) * ny; }
  Point point(int ix, int iy) const { return {x_min + (ix + 0.5) * dx(), y_min + (iy + 0.5) * dy()}; }
  Point point(std::size_t cell) const {
    return point(static_cast<int>(cell % nx), static_cast<int>(cell / nx));
  }

  friend bool operator==(const ImagingGrid&, const ImagingGrid&) = default;
};

enum class MapKind { osm, osmm, mosm, analytic_single, analytic_multi };

std::string to_string(MapKind kind);
MapKind parse_map_kind(std::string_view name);

/// Non-negative indicator values, row-major with row index = y index.
struct IndicatorMap {
  ImagingGrid grid;
  std::vector<double> values;
  MapKind kind = MapKind::osm;
  int source = 0;  // 1-based emitter for single-source kinds, 0 otherwise
  Frequency freq = Frequency::ghz(1.0);

  double& at(int ix, int iy) { return values[static_cast<std::size_t>(iy) * grid.nx + ix]; }
  double at(int ix, int iy) const { return values[static_cast<std::size_t>(iy) * grid.nx + ix]; }
  double max() const;
  std::size_t argmax() const;
  Point argmax_point() const { return grid.point(argmax()); }
};

/// Pre-modulus single-source inner product Phi(r', a_m).
struct ComplexFieldMap {
  ImagingGrid grid;
  std::vector<cplx> values;
  int source = 0;
};

/// Phi(r') = sum_n u_scat(b_n; a_m) conj(G(b_n, r')), m 1-based.
ComplexFieldMap phi_map(const MeasurementSet& ms, int m, const ImagingGrid& grid);

/// Phi for every emitter. Receivers that coincide across emitters share one
/// test-vector evaluation per cell.
std::vector<ComplexFieldMap> phi_maps(const MeasurementSet& ms, const ImagingGrid& grid);

/// |Phi(r', a_m)|.
IndicatorMap osm_map(const MeasurementSet& ms, int m, const ImagingGrid& grid);

/// sum_m |Phi(r', a_m)|.
IndicatorMap osmm_map(const MeasurementSet& ms, const ImagingGrid& grid);

/// |sum_m Phi(r', a_m) conj(G(r', a_m))|.
IndicatorMap mosm_map(const MeasurementSet& ms, const ImagingGrid& grid);

/// Single-source structure with each disk collapsed to its center:
///   |k/(6|b|) sum_s area_s contrast_s G(r_s, a_m) [J_0(k|r'-r_s|) + (3/pi) E]|.
IndicatorMap analytic_single_map(const Scene& scene, const ArrayGeometry& geom, int m, Frequency freq,
                                 const ImagingGrid& grid, const specfun::SeriesTruncation& trunc = {});

/// Multi-source structure:
///   |2/(3|a||b|) sum_s area_s contrast_s [J_0(k|r'-r_s|)^2 + (3/pi) M]|.
IndicatorMap analytic_multi_map(const Scene& scene, const ArrayGeometry& geom, Frequency freq,
                                const ImagingGrid& grid, const specfun::SeriesTruncation& trunc = {});

/// Divides by the maximum. Throws DegenerateError for an all-zero map.
IndicatorMap normalize(const IndicatorMap& map);

/// ||map - reference||_2 / ||reference||_2 over all cells.
double relative_l2(const IndicatorMap& map, const IndicatorMap& reference);

/// File stem `<kind>_<freq-GHz>_<source-or-all>`.
std::string map_stem(const IndicatorMap& map);

void write_map_csv(std::ostream& out, const IndicatorMap& map);
void write_map_csv(const std::filesystem::path& path, const IndicatorMap& map);
IndicatorMap read_map_csv(std::istream& in);
IndicatorMap read_map_csv(const std::filesystem::path& path);

/// Binary 8-bit PGM of the normalized map, top row = y_max.
void write_pgm(std::ostream& out, const IndicatorMap& map);
void write_pgm(const std::filesystem::path& path, const IndicatorMap& map);

}  // namespace osm
