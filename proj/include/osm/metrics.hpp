#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "osm/imaging.hpp"

namespace osm {

/// Cells whose center lies inside (or on the edge of) some scatterer disk.
struct TruthMask {
  ImagingGrid grid;
  std::vector<bool> mask;

  static TruthMask from_scene(const Scene& scene, const ImagingGrid& grid);
  std::size_t count() const;
};

/// |A intersect B| / |A union B| with A = {cells >= threshold}, B = truth.
/// Throws InvalidInput on a grid mismatch or an unnormalized map and
/// DegenerateError when the union is empty.
double jaccard(const IndicatorMap& map, const TruthMask& truth, double threshold);

struct JaccardPoint {
  double threshold;
  double value;
};

/// 0.01, 0.02, ..., 0.99.
std::vector<double> default_thresholds();

std::vector<JaccardPoint> jaccard_sweep(const IndicatorMap& map, const TruthMask& truth,
                                        std::span<const double> thresholds);
inline std::vector<JaccardPoint> jaccard_sweep(const IndicatorMap& map, const TruthMask& truth) {
  const auto t = default_thresholds();
  return jaccard_sweep(map, truth, t);
}

double max_value(std::span<const JaccardPoint> sweep);

/// Two-column `threshold,jaccard` CSV.
void write_jaccard_csv(std::ostream& out, std::span<const JaccardPoint> sweep);
void write_jaccard_csv(const std::filesystem::path& path, std::span<const JaccardPoint> sweep);

struct Peak {
  Point location;
  double value;
};

/// Sorted by value, descending; pairwise separated by at least min_separation.
struct PeakSet {
  std::vector<Peak> peaks;
  double min_separation = 0.0;
  double min_prominence = 0.5;

  std::size_t size() const { return peaks.size(); }
};

/// Local maxima over the 8-neighbourhood with value >= min_prominence, kept
/// greedily from the largest down while they stay min_separation away from
/// every peak already kept. On a plateau the lowest cell index wins.
PeakSet find_peaks(const IndicatorMap& map, double min_separation, double min_prominence = 0.5);

/// find_peaks with min_separation = half a wavelength at the map's frequency.
PeakSet find_peaks(const IndicatorMap& map, const Medium& medium, double min_prominence = 0.5);

/// |r1 - r2| > lambda / 2.
bool resolvable(Point r1, Point r2, Frequency freq, const Medium& medium = {});

/// Mean peak-to-center distance under the best one-to-one assignment.
/// Throws CountMismatch when the peak count differs from the scatterer count.
double localization_error(const PeakSet& peaks, const Scene& scene);

}  // namespace osm
