#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "osm/commands.hpp"
#include "osm/errors.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitData = 3;

struct Overrides {
  std::string config;
  std::vector<double> freq;
  std::vector<int> sources;
  std::vector<std::string> kinds;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<double> noise;
  std::string colmap;
  std::string input;
};

void add_common(CLI::App* sub, Overrides& o) {
  sub->add_option("--config", o.config, "JSON run configuration");
  sub->add_option("--freq", o.freq, "frequencies in GHz")->delimiter(',');
  sub->add_option("--sources", o.sources, "1-based emitter indices for single-source maps")->delimiter(',');
  sub->add_option("--kinds", o.kinds, "osm, osmm, mosm, analytic-single, analytic-multi")->delimiter(',');
  sub->add_option("--out", o.out, "output directory");
  sub->add_option("--seed", o.seed, "noise seed");
  sub->add_option("--noise", o.noise, "relative noise level");
  sub->add_option("--colmap", o.colmap, "column map for the parse command");
  sub->add_option("--input", o.input, "Fresnel-format measurement file for the parse command");
}

osm::app::RunConfig build_config(const Overrides& o) {
  using osm::ConfigError;
  osm::app::RunConfig cfg = o.config.empty() ? osm::app::RunConfig{} : osm::app::load_config(o.config);
  if (!o.freq.empty()) cfg.frequencies_ghz = o.freq;
  if (!o.sources.empty()) cfg.sources = o.sources;
  if (!o.kinds.empty()) {
    cfg.kinds.clear();
    for (const auto& k : o.kinds) {
      try {
        cfg.kinds.push_back(osm::parse_map_kind(k));
      } catch (const osm::InvalidInput& e) {
        throw ConfigError(std::string("--kinds: ") + e.what());
      }
    }
  }
  if (!o.out.empty()) cfg.output = o.out;
  if (o.seed) cfg.synthesis.seed = *o.seed;
  if (o.noise) cfg.synthesis.noise = *o.noise;
  if (!o.input.empty()) {
    if (!cfg.input) cfg.input.emplace();
    cfg.input->file = o.input;
  }
  if (!o.colmap.empty()) {
    if (!cfg.input) throw ConfigError("--colmap: no input file given");
    try {
      cfg.input->columns = osm::ColumnMap::parse(o.colmap);
    } catch (const osm::InvalidInput& e) {
      throw ConfigError(std::string("--colmap: ") + e.what());
    }
  }
  cfg.validate();
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Orthogonality sampling imaging toolkit"};
  app.require_subcommand(1);

  Overrides o;
  using Command = osm::app::Written (*)(const osm::app::RunConfig&);
  const std::pair<const char*, Command> commands[] = {
      {"synth", osm::app::cmd_synth},
      {"parse", osm::app::cmd_parse},
      {"image", osm::app::cmd_image},
      {"analyze", osm::app::cmd_analyze},
      {"score", osm::app::cmd_score},
  };
  const char* help[] = {
      "synthesize measurement CSVs from the configured scene",
      "convert a Fresnel-format file into measurement CSVs",
      "write indicator maps as CSV and PGM",
      "write Bessel-series curves and sidelobe bounds",
      "write Jaccard sweeps and a peak summary for existing maps",
  };
  std::vector<CLI::App*> subs;
  for (std::size_t i = 0; i < std::size(commands); ++i) {
    subs.push_back(app.add_subcommand(commands[i].first, help[i]));
    add_common(subs.back(), o);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }

  try {
    const osm::app::RunConfig cfg = build_config(o);
    for (std::size_t i = 0; i < subs.size(); ++i) {
      if (!subs[i]->parsed()) continue;
      for (const auto& path : commands[i].second(cfg)) std::cout << path.string() << '\n';
    }
  } catch (const osm::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  }
  return 0;
}
