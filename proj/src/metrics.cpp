#include "osm/metrics.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <numeric>
#include <ostream>

#include "osm/errors.hpp"
#include "osm/text.hpp"

namespace osm {

namespace {

constexpr double kNormalizedSlack = 1e-12;
constexpr std::size_t kMaxAssignmentSize = 9;

void require_normalized(const IndicatorMap& map) {
  for (double v : map.values) {
    if (!(v >= 0.0) || v > 1.0 + kNormalizedSlack) {
      throw InvalidInput("indicator map must be normalized to [0, 1]");
    }
  }
}

}  // namespace

TruthMask TruthMask::from_scene(const Scene& scene, const ImagingGrid& grid) {
  grid.validate();
  TruthMask t;
  t.grid = grid;
  t.mask.assign(grid.size(), false);
  for (std::size_t cell = 0; cell < grid.size(); ++cell) {
    const Point p = grid.point(cell);
    for (const Scatterer& s : scene.scatterers) {
      if (distance(p, s.center) <= s.radius) {
        t.mask[cell] = true;
        break;
      }
    }
  }
  return t;
}

std::size_t TruthMask::count() const { return static_cast<std::size_t>(std::count(mask.begin(), mask.end(), true)); }

double jaccard(const IndicatorMap& map, const TruthMask& truth, double threshold) {
  if (!(map.grid == truth.grid)) throw InvalidInput("jaccard: map grid differs from truth grid");
  if (!(threshold > 0.0 && threshold < 1.0)) throw InvalidInput("jaccard: threshold must lie in (0, 1)");
  require_normalized(map);

  std::size_t inter = 0;
  std::size_t uni = 0;
  for (std::size_t i = 0; i < map.values.size(); ++i) {
    const bool a = map.values[i] >= threshold;
    const bool b = truth.mask[i];
    inter += a && b;
    uni += a || b;
  }
  if (uni == 0) throw DegenerateError("jaccard: empty union of thresholded map and truth");
  return static_cast<double>(inter) / static_cast<double>(uni);
}

std::vector<double> default_thresholds() {
  std::vector<double> t;
  for (int i = 1; i <= 99; ++i) t.push_back(i / 100.0);
  return t;
}

std::vector<JaccardPoint> jaccard_sweep(const IndicatorMap& map, const TruthMask& truth,
                                        std::span<const double> thresholds) {
  std::vector<JaccardPoint> out;
  out.reserve(thresholds.size());
  for (double t : thresholds) out.push_back({t, jaccard(map, truth, t)});
  return out;
}

double max_value(std::span<const JaccardPoint> sweep) {
  double best = 0.0;
  for (const auto& p : sweep) best = std::max(best, p.value);
  return best;
}

void write_jaccard_csv(std::ostream& out, std::span<const JaccardPoint> sweep) {
  out << "threshold,jaccard\n";
  for (const auto& p : sweep) out << text::format_double(p.threshold) << ',' << text::format_double(p.value) << '\n';
}

void write_jaccard_csv(const std::filesystem::path& path, std::span<const JaccardPoint> sweep) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  write_jaccard_csv(out, sweep);
  if (!out) throw Error("failed writing " + path.string());
}

PeakSet find_peaks(const IndicatorMap& map, double min_separation, double min_prominence) {
  if (!(min_separation >= 0.0)) throw InvalidInput("find_peaks: min_separation must be non-negative");
  require_normalized(map);

  const int nx = map.grid.nx;
  const int ny = map.grid.ny;
  std::vector<std::size_t> candidates;
  for (int iy = 0; iy < ny; ++iy) {
    for (int ix = 0; ix < nx; ++ix) {
      const double v = map.at(ix, iy);
      if (!(v > 0.0) || v < min_prominence) continue;
      const std::size_t here = static_cast<std::size_t>(iy) * nx + ix;
      bool is_max = true;
      for (int dy = -1; dy <= 1 && is_max; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
          const int jx = ix + dx;
          const int jy = iy + dy;
          if ((dx == 0 && dy == 0) || jx < 0 || jy < 0 || jx >= nx || jy >= ny) continue;
          const double w = map.at(jx, jy);
          const std::size_t there = static_cast<std::size_t>(jy) * nx + jx;
          if (w > v || (w == v && there < here)) {
            is_max = false;
            break;
          }
        }
      }
      if (is_max) candidates.push_back(here);
    }
  }

  std::stable_sort(candidates.begin(), candidates.end(),
                   [&](std::size_t a, std::size_t b) { return map.values[a] > map.values[b]; });

  PeakSet set;
  set.min_separation = min_separation;
  set.min_prominence = min_prominence;
  for (std::size_t c : candidates) {
    const Point p = map.grid.point(c);
    const bool far = std::all_of(set.peaks.begin(), set.peaks.end(),
                                 [&](const Peak& q) { return distance(p, q.location) >= min_separation; });
    if (far) set.peaks.push_back({p, map.values[c]});
  }
  return set;
}

PeakSet find_peaks(const IndicatorMap& map, const Medium& medium, double min_prominence) {
  return find_peaks(map, 0.5 * wavelength(map.freq, medium), min_prominence);
}

bool resolvable(Point r1, Point r2, Frequency freq, const Medium& medium) {
  return distance(r1, r2) > 0.5 * wavelength(freq, medium);
}

double localization_error(const PeakSet& peaks, const Scene& scene) {
  const std::size_t n = scene.scatterers.size();
  if (peaks.size() != n) {
    throw CountMismatch("localization_error: " + std::to_string(peaks.size()) + " peaks for " + std::to_string(n) +
                        " scatterers");
  }
  if (n == 0) return 0.0;
  if (n > kMaxAssignmentSize) throw InvalidInput("localization_error: too many scatterers for exact assignment");

  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  double best = std::numeric_limits<double>::infinity();
  do {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) total += distance(peaks.peaks[i].location, scene.scatterers[perm[i]].center);
    best = std::min(best, total);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best / static_cast<double>(n);
}

}  // namespace osm
