#pragma once

#include <filesystem>
#include <vector>

#include "osm/config.hpp"

namespace osm::app {

using Written = std::vector<std::filesystem::path>;

/// Synthesizes `meas_<ghz>.csv` for every configured frequency.
Written cmd_synth(const RunConfig& cfg);

/// Converts the configured Fresnel-format input file into `meas_<ghz>.csv`.
Written cmd_parse(const RunConfig& cfg);

/// Writes `<kind>_<ghz>_<source|all>.{csv,pgm}` for every frequency and kind.
/// Data-driven kinds read the measurement CSVs from the output directory.
Written cmd_image(const RunConfig& cfg);

/// Writes, per frequency, `analysis_<ghz>/` with BesselFunctions1..3.csv,
/// d1.csv, d2.csv and bounds.csv.
Written cmd_analyze(const RunConfig& cfg);

/// Reads the maps written by cmd_image and writes `jaccard_<stem>.csv` per
/// map plus `summary.csv`.
Written cmd_score(const RunConfig& cfg);

}  // namespace osm::app
