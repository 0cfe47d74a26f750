#pragma once

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "osm/forward.hpp"

namespace osm {

enum class FrequencyUnit { hz, ghz };

/// Where each quantity lives in a whitespace-separated measurement row.
/// Column indices are 0-based; `width` is the exact field count of a data row.
struct ColumnMap {
  int tx_angle = 0;
  int rx_angle = 1;
  int freq = 2;
  int re_total = 3;
  int im_total = 4;
  int re_incident = 5;
  int im_incident = 6;
  int width = 7;
  FrequencyUnit unit = FrequencyUnit::ghz;
  /// Conjugate both fields on read, for files recorded with e^{+i omega t}.
  bool conjugate = false;

  void validate() const;

  /// Parses "tx=0,rx=1,freq=2,re_tot=3,im_tot=4,re_inc=5,im_inc=6,width=7,unit=GHz,conj=0".
  /// Keys not given keep their defaults.
  static ColumnMap parse(std::string_view spec);
  std::string to_string() const;
};

/// One measurement row. Angles are in degrees, normalized to [0, 360).
struct FresnelRecord {
  double tx_angle = 0.0;
  double rx_angle = 0.0;
  double freq_hz = 0.0;
  cplx total;
  cplx incident;

  friend bool operator==(const FresnelRecord&, const FresnelRecord&) = default;
};

/// Streams records to `sink` one line at a time. Blank lines and lines whose
/// first character cannot start a number ('#', letters, ...) are skipped.
void for_each_record(std::istream& in, const ColumnMap& cols,
                     const std::function<void(const FresnelRecord&)>& sink);

std::vector<FresnelRecord> parse_stream(std::istream& in, const ColumnMap& cols);
std::vector<FresnelRecord> parse_file(const std::filesystem::path& path, const ColumnMap& cols);

/// Builds u_scat = total - incident on the (emitter, receiver) grid of `geom`.
/// Records at other frequencies or off-grid angles are ignored.
MeasurementSet assemble(std::span<const FresnelRecord> records, const ArrayGeometry& geom,
                        Frequency target, double angle_tol_deg = 0.5,
                        const Medium& medium = Medium::free_space());

/// Writes a Fresnel-style file for a synthetic set: the incident field at b_n
/// is G(b_n, a_m) and the total field is incident + scattered.
void write_fresnel_file(std::ostream& out, const MeasurementSet& ms, const ColumnMap& cols = {});
void write_fresnel_file(const std::filesystem::path& path, const MeasurementSet& ms,
                        const ColumnMap& cols = {});

}  // namespace osm
