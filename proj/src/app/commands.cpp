#include "osm/commands.hpp"

#include <cmath>
#include <fstream>

#include "osm/errors.hpp"
#include "osm/fresnel_io.hpp"
#include "osm/imaging.hpp"
#include "osm/metrics.hpp"
#include "osm/text.hpp"

namespace osm::app {

namespace {

using text::format_double;

void ensure_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error("cannot create output directory " + dir.string() + ": " + ec.message());
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out.precision(17);
  return out;
}

void close_out(std::ofstream& out, const std::filesystem::path& path) {
  out.close();
  if (!out) throw Error("failed writing " + path.string());
}

bool data_driven(MapKind kind) { return kind == MapKind::osm || kind == MapKind::osmm || kind == MapKind::mosm; }
bool per_source(MapKind kind) { return kind == MapKind::osm || kind == MapKind::analytic_single; }

MeasurementSet load_measurement(const RunConfig& cfg, Frequency freq) {
  const auto path = measurement_path(cfg, freq);
  if (!std::filesystem::exists(path)) {
    throw Error("missing measurement data: expected " + path.string() + " (run `osm synth` or `osm parse` first)");
  }
  MeasurementSet ms = read_measurement_csv(path);
  if (!(ms.geometry == cfg.geometry)) {
    throw Error(path.string() + ": array geometry differs from the configuration");
  }
  return ms;
}

std::vector<double> x_samples(const AnalysisConfig& a) {
  std::vector<double> xs;
  if (a.points == 1) return {a.x_min};
  for (int i = 0; i < a.points; ++i) xs.push_back(a.x_min + (a.x_max - a.x_min) * i / (a.points - 1));
  return xs;
}

void scale_to_unit_max(std::vector<double>& v) {
  double peak = 0.0;
  for (double x : v) peak = std::max(peak, x);
  if (peak > 0.0) {
    for (double& x : v) x /= peak;
  }
}

void write_xyz(const std::filesystem::path& path, std::span<const double> x, std::span<const double> y,
               std::span<const double> z) {
  auto out = open_out(path);
  out << "x,y,z\n";
  for (std::size_t i = 0; i < x.size(); ++i) {
    out << format_double(x[i]) << ',' << format_double(y[i]) << ',' << format_double(z[i]) << '\n';
  }
  close_out(out, path);
}

void write_xy(const std::filesystem::path& path, std::span<const double> x, std::span<const double> y) {
  auto out = open_out(path);
  out << "x,value\n";
  for (std::size_t i = 0; i < x.size(); ++i) out << format_double(x[i]) << ',' << format_double(y[i]) << '\n';
  close_out(out, path);
}

}  // namespace

Written cmd_synth(const RunConfig& cfg) {
  cfg.validate();
  ensure_dir(cfg.output);
  Written written;
  for (const Frequency f : cfg.frequencies()) {
    MeasurementSet ms = cfg.synthesis.model == ForwardModel::born
                            ? born_field(cfg.scene, cfg.geometry, f)
                            : quadrature_field(cfg.scene, cfg.geometry, f, cfg.synthesis.quadrature_nodes);
    if (cfg.synthesis.noise > 0.0) ms = add_noise(ms, cfg.synthesis.noise, cfg.synthesis.seed);
    const auto path = measurement_path(cfg, f);
    write_measurement_csv(path, ms);
    written.push_back(path);
  }
  return written;
}

Written cmd_parse(const RunConfig& cfg) {
  cfg.validate();
  if (!cfg.input) throw ConfigError("input: the parse command needs an input section or --input");
  const InputConfig& in = *cfg.input;
  if (!std::filesystem::exists(in.file)) throw Error("missing input file " + in.file.string());
  ensure_dir(cfg.output);

  const std::vector<FresnelRecord> records = parse_file(in.file, in.columns);
  Written written;
  for (const Frequency f : cfg.frequencies()) {
    const MeasurementSet ms = assemble(records, cfg.geometry, f, in.angle_tolerance_deg, cfg.scene.medium);
    const auto path = measurement_path(cfg, f);
    write_measurement_csv(path, ms);
    written.push_back(path);
  }
  return written;
}

Written cmd_image(const RunConfig& cfg) {
  cfg.validate();
  Written written;
  if (cfg.kinds.empty()) return written;
  ensure_dir(cfg.output);

  auto emit = [&](const IndicatorMap& map) {
    const std::string stem = map_stem(map);
    const auto csv = cfg.output / (stem + ".csv");
    const auto pgm = cfg.output / (stem + ".pgm");
    write_map_csv(csv, map);
    write_pgm(pgm, map);
    written.push_back(csv);
    written.push_back(pgm);
  };

  for (const Frequency f : cfg.frequencies()) {
    bool needs_data = false;
    for (MapKind k : cfg.kinds) needs_data = needs_data || data_driven(k);
    MeasurementSet ms;
    if (needs_data) ms = load_measurement(cfg, f);

    for (MapKind kind : cfg.kinds) {
      if (per_source(kind)) {
        for (int m : cfg.sources) {
          emit(kind == MapKind::osm
                   ? osm_map(ms, m, cfg.grid)
                   : analytic_single_map(cfg.scene, cfg.geometry, m, f, cfg.grid, cfg.truncation));
        }
        continue;
      }
      switch (kind) {
        case MapKind::osmm: emit(osmm_map(ms, cfg.grid)); break;
        case MapKind::mosm: emit(mosm_map(ms, cfg.grid)); break;
        case MapKind::analytic_multi:
          emit(analytic_multi_map(cfg.scene, cfg.geometry, f, cfg.grid, cfg.truncation));
          break;
        default: break;
      }
    }
  }
  return written;
}

Written cmd_analyze(const RunConfig& cfg) {
  cfg.validate();
  const std::vector<double> xs = x_samples(cfg.analysis);
  const int terms = cfg.analysis.bound_terms;
  const auto fixed = specfun::SeriesTruncation::fixed(terms);
  Written written;

  for (const Frequency f : cfg.frequencies()) {
    const double k = wavenumber(f, cfg.scene.medium);
    const auto dir = cfg.output / ("analysis_" + text::ghz_label(f.ghz()));
    ensure_dir(dir);

    std::vector<double> j0_abs, j0_sq, osm_profile, mosm_profile;
    for (double x : xs) {
      const double j0 = specfun::bessel_j(0, k * x);
      j0_abs.push_back(std::abs(j0));
      j0_sq.push_back(j0 * j0);
      // Point target at the origin, emitter 1 on the positive x axis.
      const double phi = x < 0.0 ? kPi : 0.0;
      const cplx e = specfun::disturb_factor(std::abs(x), k, 0.0, phi, cfg.truncation);
      const cplx m = specfun::multi_factor(std::abs(x), k, cfg.truncation);
      osm_profile.push_back(std::abs(j0 + 3.0 / kPi * e));
      mosm_profile.push_back(std::abs(j0 * j0 + 3.0 / kPi * m));
    }
    scale_to_unit_max(osm_profile);
    scale_to_unit_max(mosm_profile);
    const std::vector<double> d1 = specfun::d1_curve(xs, k, cfg.truncation);
    const std::vector<double> d2 = specfun::d2_curve(xs, k, cfg.truncation);

    const std::filesystem::path files[] = {dir / "BesselFunctions1.csv", dir / "BesselFunctions2.csv",
                                           dir / "BesselFunctions3.csv", dir / "d1.csv",
                                           dir / "d2.csv",               dir / "bounds.csv"};
    write_xyz(files[0], xs, j0_abs, d1);
    write_xyz(files[1], xs, j0_sq, d2);
    write_xyz(files[2], xs, osm_profile, mosm_profile);
    write_xy(files[3], xs, d1);
    write_xy(files[4], xs, d2);

    auto out = open_out(files[5]);
    out << "x,kx,applicable,abs_e,bound_e,abs_m,bound_m\n";
    for (double x : xs) {
      const double d = std::abs(x);
      const double e = std::abs(specfun::disturb_factor(d, k, 0.0, 0.0, fixed));
      const double m = std::abs(specfun::multi_factor(d, k, fixed));
      out << format_double(x) << ',' << format_double(k * d) << ',';
      if (k * d > 0.25) {
        out << "1," << format_double(e) << ',' << format_double(specfun::sidelobe_bound_e(d, k, terms)) << ','
            << format_double(m) << ',' << format_double(specfun::sidelobe_bound_m(d, k, terms)) << '\n';
      } else {
        out << "0," << format_double(e) << ",NA," << format_double(m) << ",NA\n";
      }
    }
    close_out(out, files[5]);
    written.insert(written.end(), std::begin(files), std::end(files));
  }
  return written;
}

Written cmd_score(const RunConfig& cfg) {
  cfg.validate();
  ensure_dir(cfg.output);
  const TruthMask truth = TruthMask::from_scene(cfg.scene, cfg.grid);
  const std::vector<double> thresholds =
      cfg.score.thresholds.empty() ? default_thresholds() : cfg.score.thresholds;
  const auto& sc = cfg.scene.scatterers;

  Written written;
  const auto summary_path = cfg.output / "summary.csv";
  auto summary = open_out(summary_path);
  summary << "map,frequency_ghz,max_jaccard,best_threshold,peaks,localization_error,resolvable\n";

  for (const Frequency f : cfg.frequencies()) {
    std::string resolvable_flag = "NA";
    if (sc.size() >= 2) {
      bool all = true;
      for (std::size_t i = 0; i < sc.size(); ++i) {
        for (std::size_t j = i + 1; j < sc.size(); ++j) {
          all = all && resolvable(sc[i].center, sc[j].center, f, cfg.scene.medium);
        }
      }
      resolvable_flag = all ? "true" : "false";
    }

    std::vector<std::string> stems;
    for (MapKind kind : cfg.kinds) {
      IndicatorMap probe;
      probe.kind = kind;
      probe.freq = f;
      if (per_source(kind)) {
        for (int m : cfg.sources) {
          probe.source = m;
          stems.push_back(map_stem(probe));
        }
      } else {
        stems.push_back(map_stem(probe));
      }
    }

    for (const std::string& stem : stems) {
      const auto map_path = cfg.output / (stem + ".csv");
      if (!std::filesystem::exists(map_path)) {
        throw Error("missing map: expected " + map_path.string() + " (run `osm image` first)");
      }
      const IndicatorMap raw = read_map_csv(map_path);
      if (!(raw.grid == truth.grid)) {
        throw Error(map_path.string() + ": map grid does not match the configured truth grid");
      }
      const IndicatorMap map = normalize(raw);
      const auto sweep = jaccard_sweep(map, truth, thresholds);
      const auto sweep_path = cfg.output / ("jaccard_" + stem + ".csv");
      write_jaccard_csv(sweep_path, sweep);
      written.push_back(sweep_path);

      JaccardPoint best{0.0, -1.0};
      for (const auto& p : sweep) {
        if (p.value > best.value) best = p;
      }
      const PeakSet peaks = find_peaks(map, cfg.scene.medium, cfg.score.prominence);
      std::string loc = "NA";
      if (peaks.size() == sc.size()) loc = format_double(localization_error(peaks, cfg.scene));
      summary << stem << ',' << text::ghz_label(f.ghz()) << ',' << format_double(best.value) << ','
              << format_double(best.threshold) << ',' << peaks.size() << ',' << loc << ',' << resolvable_flag
              << '\n';
    }
  }
  close_out(summary, summary_path);
  written.push_back(summary_path);
  return written;
}

}  // namespace osm::app
