#pragma once

#include <complex>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <vector>

#include "osm/geometry.hpp"

namespace osm {

using cplx = std::complex<double>;

/// Dense row-major complex matrix.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(int rows, int cols) : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols) {}

  int rows() const noexcept { return rows_; }
  int cols() const noexcept { return cols_; }

  cplx& operator()(int r, int c) { return data_[index(r, c)]; }
  const cplx& operator()(int r, int c) const { return data_[index(r, c)]; }

  std::vector<cplx>& raw() noexcept { return data_; }
  const std::vector<cplx>& raw() const noexcept { return data_; }

  friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

 private:
  std::size_t index(int r, int c) const { return static_cast<std::size_t>(r) * cols_ + c; }

  int rows_ = 0;
  int cols_ = 0;
  std::vector<cplx> data_;
};

struct Scatterer {
  Point center;
  double radius = 0.015;
  double eps = 3.0 * kVacuumPermittivity;

  double area() const { return kPi * radius * radius; }
};

struct Scene {
  std::vector<Scatterer> scatterers;
  Medium medium;

  /// Non-empty, positive radii and permittivities, pairwise disjoint disks.
  void validate() const;

  /// (eps_s - eps_b) / (eps_b mu_b) for one scatterer.
  double contrast(const Scatterer& s) const;

  /// The two-cylinder Fresnel target: radius 0.015 m, eps = 3 eps_b, centers
  /// `r1` and (-0.045, 0). The first center defaults to (0.045, 0.010); some
  /// dataset documentation lists (0.045, 0).
  static Scene fresnel_two_disk(Point r1 = {0.045, 0.010});
};

/// Scattered field u_scat(b_n; a_m) for every emitter m (rows) and receiver n
/// (columns) at one frequency. Indices into `data` are 0-based; `sample` takes
/// the 1-based indices used everywhere else.
struct MeasurementSet {
  ArrayGeometry geometry;
  Frequency freq = Frequency::ghz(1.0);
  Medium medium;
  ComplexMatrix data;

  cplx sample(int m, int n) const { return data(m - 1, n - 1); }
  double wavenumber() const { return osm::wavenumber(freq, medium); }
  void validate() const;
};

/// G(r, r2) = -(i/4) H_0^(1)(k |r - r2|).
cplx green(Point r, Point r2, double k);

/// Throws InvalidScene when any emitter or receiver lies inside a disk.
void check_antennas(const Scene& scene, const ArrayGeometry& geom);

/// Born data with each disk collapsed to its center:
///   sum_s k^2 area_s contrast_s G(b_n, r_s) G(r_s, a_m).
MeasurementSet born_field(const Scene& scene, const ArrayGeometry& geom, Frequency freq);

/// Born data integrated over each disk with a polar tensor rule (radial
/// Gauss-Legendre times uniform angular), roughly `nodes_per_disk` nodes.
MeasurementSet quadrature_field(const Scene& scene, const ArrayGeometry& geom, Frequency freq,
                                int nodes_per_disk = 512);

/// Adds complex Gaussian noise with E|noise|^2 = (level * RMS|data|)^2 per entry.
MeasurementSet add_noise(const MeasurementSet& ms, double relative_level, std::uint64_t seed);

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
GaussRule gauss_legendre(int n);

// CSV layout: '#'-prefixed `key = value` metadata lines, a `m,n,re,im` header,
// then one row per (m, n) with 1-based indices and 17 significant digits.
void write_measurement_csv(std::ostream& out, const MeasurementSet& ms);
void write_measurement_csv(const std::filesystem::path& path, const MeasurementSet& ms);
MeasurementSet read_measurement_csv(std::istream& in);
MeasurementSet read_measurement_csv(const std::filesystem::path& path);

}  // namespace osm
