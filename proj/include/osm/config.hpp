#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "osm/forward.hpp"
#include "osm/fresnel_io.hpp"
#include "osm/imaging.hpp"
#include "osm/specfun.hpp"

namespace osm::app {

enum class ForwardModel { born, quadrature };

struct SynthesisConfig {
  ForwardModel model = ForwardModel::born;
  int quadrature_nodes = 512;
  double noise = 0.0;
  std::uint64_t seed = 1;
};

/// Fresnel-format file ingested by `parse`.
struct InputConfig {
  std::filesystem::path file;
  ColumnMap columns;
  double angle_tolerance_deg = 0.5;
};

struct AnalysisConfig {
  double x_min = -1.0;
  double x_max = 1.0;
  int points = 401;
  int bound_terms = 50;
};

struct ScoreConfig {
  double prominence = 0.5;
  std::vector<double> thresholds = {};  // empty = 0.01 .. 0.99
};

/// Everything a run needs. Built from defaults, a JSON file and CLI flags,
/// in that order, then validated as a whole.
struct RunConfig {
  Scene scene = Scene::fresnel_two_disk();
  ArrayGeometry geometry;
  std::vector<double> frequencies_ghz = {1.0, 2.0, 3.0, 4.0};
  ImagingGrid grid;
  std::vector<MapKind> kinds = {MapKind::osmm, MapKind::mosm};
  std::vector<int> sources = {1};
  specfun::SeriesTruncation truncation;
  SynthesisConfig synthesis;
  std::optional<InputConfig> input;
  AnalysisConfig analysis;
  ScoreConfig score;
  std::filesystem::path output = "out";

  std::vector<Frequency> frequencies() const;

  /// Throws ConfigError naming the offending field.
  void validate() const;
};

/// Parses JSON text. Unknown keys and wrong types are ConfigErrors with the
/// full field path, e.g. `scene.scatterers[1].radius`.
RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::filesystem::path& path);

/// `meas_<ghz>.csv` inside the output directory.
std::filesystem::path measurement_path(const RunConfig& cfg, Frequency freq);

}  // namespace osm::app
