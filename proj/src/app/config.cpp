#include "osm/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "osm/errors.hpp"
#include "osm/text.hpp"

namespace osm::app {

namespace {

using json = nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ConfigError((path.empty() ? std::string("<root>") : path) + ": " + what);
}

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }
std::string index(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

// Walks one JSON object, remembering which keys were consumed so that
// leftovers can be reported as unknown.
class Section {
 public:
  Section(const json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
    if (!obj_.is_object()) fail(path_, "expected an object");
  }

  const std::string& path() const { return path_; }

  const json* find(const std::string& key) {
    seen_.insert(key);
    auto it = obj_.find(key);
    return it == obj_.end() ? nullptr : &*it;
  }

  void read(const std::string& key, double& out) {
    if (const json* v = find(key)) out = as_double(*v, join(path_, key));
  }

  void read(const std::string& key, int& out) {
    if (const json* v = find(key)) out = as_int(*v, join(path_, key));
  }

  void read(const std::string& key, bool& out) {
    if (const json* v = find(key)) {
      if (!v->is_boolean()) fail(join(path_, key), "expected true or false");
      out = v->get<bool>();
    }
  }

  void read(const std::string& key, std::string& out) {
    if (const json* v = find(key)) {
      if (!v->is_string()) fail(join(path_, key), "expected a string");
      out = v->get<std::string>();
    }
  }

  void finish() const {
    for (auto it = obj_.begin(); it != obj_.end(); ++it) {
      if (!seen_.count(it.key())) fail(join(path_, it.key()), "unknown key");
    }
  }

  static double as_double(const json& v, const std::string& path) {
    if (!v.is_number()) fail(path, "expected a number");
    return v.get<double>();
  }

  static int as_int(const json& v, const std::string& path) {
    if (!v.is_number_integer()) fail(path, "expected an integer");
    return v.get<int>();
  }

 private:
  const json& obj_;
  std::string path_;
  std::set<std::string> seen_;
};

const json& require_array(const json& v, const std::string& path) {
  if (!v.is_array()) fail(path, "expected an array");
  return v;
}

Point read_point(const json& v, const std::string& path) {
  require_array(v, path);
  if (v.size() != 2) fail(path, "expected [x, y]");
  return {Section::as_double(v[0], index(path, 0)), Section::as_double(v[1], index(path, 1))};
}

std::vector<double> read_doubles(const json& v, const std::string& path) {
  require_array(v, path);
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(Section::as_double(v[i], index(path, i)));
  return out;
}

Medium read_medium(const json& v, const std::string& path) {
  Section s(v, path);
  double eps_r = 1.0;
  double mu_r = 1.0;
  s.read("eps_r", eps_r);
  s.read("mu_r", mu_r);
  s.finish();
  return {eps_r * kVacuumPermittivity, mu_r * kVacuumPermeability};
}

void read_scene(const json& v, const std::string& path, Scene& scene) {
  Section s(v, path);
  if (const json* m = s.find("medium")) scene.medium = read_medium(*m, join(path, "medium"));
  if (const json* list = s.find("scatterers")) {
    const std::string lp = join(path, "scatterers");
    require_array(*list, lp);
    scene.scatterers.clear();
    for (std::size_t i = 0; i < list->size(); ++i) {
      Section d((*list)[i], index(lp, i));
      Scatterer sc;
      double eps_r = 3.0;
      const json* c = d.find("center");
      if (!c) fail(d.path(), "missing center");
      sc.center = read_point(*c, join(d.path(), "center"));
      d.read("radius", sc.radius);
      d.read("eps_r", eps_r);
      d.finish();
      sc.eps = eps_r * kVacuumPermittivity;
      scene.scatterers.push_back(sc);
    }
  }
  s.finish();
}

void read_geometry(const json& v, const std::string& path, ArrayGeometry& g) {
  Section s(v, path);
  s.read("emitter_radius", g.emitter_radius);
  s.read("receiver_radius", g.receiver_radius);
  s.read("num_emitters", g.num_emitters);
  s.read("num_receivers", g.num_receivers);
  double start = rad_to_deg(g.aperture_start);
  double span = rad_to_deg(g.aperture_span);
  s.read("aperture_start_deg", start);
  s.read("aperture_span_deg", span);
  g.aperture_start = deg_to_rad(start);
  g.aperture_span = deg_to_rad(span);
  s.finish();
}

void read_grid(const json& v, const std::string& path, ImagingGrid& g) {
  Section s(v, path);
  if (const json* x = s.find("x")) {
    const Point p = read_point(*x, join(path, "x"));
    g.x_min = p.x;
    g.x_max = p.y;
  }
  if (const json* y = s.find("y")) {
    const Point p = read_point(*y, join(path, "y"));
    g.y_min = p.x;
    g.y_max = p.y;
  }
  s.read("nx", g.nx);
  s.read("ny", g.ny);
  s.finish();
}

void read_imaging(const json& v, const std::string& path, RunConfig& cfg) {
  Section s(v, path);
  if (const json* kinds = s.find("kinds")) {
    const std::string kp = join(path, "kinds");
    require_array(*kinds, kp);
    cfg.kinds.clear();
    for (std::size_t i = 0; i < kinds->size(); ++i) {
      const json& k = (*kinds)[i];
      if (!k.is_string()) fail(index(kp, i), "expected a string");
      try {
        cfg.kinds.push_back(parse_map_kind(k.get<std::string>()));
      } catch (const InvalidInput& e) {
        fail(index(kp, i), e.what());
      }
    }
  }
  if (const json* src = s.find("sources")) {
    const std::string sp = join(path, "sources");
    require_array(*src, sp);
    cfg.sources.clear();
    for (std::size_t i = 0; i < src->size(); ++i) cfg.sources.push_back(Section::as_int((*src)[i], index(sp, i)));
  }
  s.finish();
}

void read_truncation(const json& v, const std::string& path, specfun::SeriesTruncation& t) {
  Section s(v, path);
  s.read("max_order", t.max_order);
  s.read("tolerance", t.tolerance);
  s.read("adaptive", t.adaptive);
  s.finish();
}

void read_synthesis(const json& v, const std::string& path, SynthesisConfig& syn) {
  Section s(v, path);
  std::string model = syn.model == ForwardModel::born ? "born" : "quadrature";
  s.read("model", model);
  if (model == "born") syn.model = ForwardModel::born;
  else if (model == "quadrature") syn.model = ForwardModel::quadrature;
  else fail(join(path, "model"), "expected \"born\" or \"quadrature\"");
  s.read("quadrature_nodes", syn.quadrature_nodes);
  s.read("noise", syn.noise);
  if (const json* seed = s.find("seed")) {
    if (!seed->is_number_unsigned()) fail(join(path, "seed"), "expected a non-negative integer");
    syn.seed = seed->get<std::uint64_t>();
  }
  s.finish();
}

void read_input(const json& v, const std::string& path, const std::filesystem::path& base, RunConfig& cfg) {
  Section s(v, path);
  InputConfig in;
  std::string file;
  std::string columns;
  s.read("file", file);
  s.read("columns", columns);
  s.read("angle_tolerance_deg", in.angle_tolerance_deg);
  s.finish();
  if (file.empty()) fail(join(path, "file"), "missing file name");
  in.file = std::filesystem::path(file).is_absolute() ? std::filesystem::path(file) : base / file;
  if (!columns.empty()) {
    try {
      in.columns = ColumnMap::parse(columns);
    } catch (const InvalidInput& e) {
      fail(join(path, "columns"), e.what());
    }
  }
  cfg.input = in;
}

void read_analysis(const json& v, const std::string& path, AnalysisConfig& a) {
  Section s(v, path);
  s.read("x_min", a.x_min);
  s.read("x_max", a.x_max);
  s.read("points", a.points);
  s.read("bound_terms", a.bound_terms);
  s.finish();
}

void read_score(const json& v, const std::string& path, ScoreConfig& sc) {
  Section s(v, path);
  s.read("prominence", sc.prominence);
  if (const json* t = s.find("thresholds")) sc.thresholds = read_doubles(*t, join(path, "thresholds"));
  s.finish();
}

RunConfig parse_with_base(const std::string& json_text, const std::filesystem::path& base) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("<root>: invalid JSON: ") + e.what());
  }

  RunConfig cfg;
  Section s(root, "");
  if (const json* v = s.find("scene")) read_scene(*v, "scene", cfg.scene);
  if (const json* v = s.find("geometry")) read_geometry(*v, "geometry", cfg.geometry);
  if (const json* v = s.find("frequencies_ghz")) cfg.frequencies_ghz = read_doubles(*v, "frequencies_ghz");
  if (const json* v = s.find("grid")) read_grid(*v, "grid", cfg.grid);
  if (const json* v = s.find("imaging")) read_imaging(*v, "imaging", cfg);
  if (const json* v = s.find("truncation")) read_truncation(*v, "truncation", cfg.truncation);
  if (const json* v = s.find("synthesis")) read_synthesis(*v, "synthesis", cfg.synthesis);
  if (const json* v = s.find("input")) read_input(*v, "input", base, cfg);
  if (const json* v = s.find("analysis")) read_analysis(*v, "analysis", cfg.analysis);
  if (const json* v = s.find("score")) read_score(*v, "score", cfg.score);
  std::string output = cfg.output.string();
  s.read("output", output);
  cfg.output = output;
  s.finish();
  return cfg;
}

// Runs a module validator and re-raises its complaint under `path`.
template <class F>
void check(const std::string& path, F&& f) {
  try {
    f();
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    fail(path, e.what());
  }
}

}  // namespace

std::vector<Frequency> RunConfig::frequencies() const {
  std::vector<Frequency> out;
  for (double f : frequencies_ghz) out.push_back(Frequency::ghz(f));
  return out;
}

void RunConfig::validate() const {
  check("scene.medium", [&] { scene.medium.validate(); });
  for (std::size_t i = 0; i < scene.scatterers.size(); ++i) {
    const Scatterer& s = scene.scatterers[i];
    const std::string p = index("scene.scatterers", i);
    if (!(s.radius > 0.0) || !std::isfinite(s.radius)) fail(p + ".radius", "must be positive");
    if (!(s.eps > 0.0) || !std::isfinite(s.eps)) fail(p + ".eps_r", "must be positive");
  }
  check("scene", [&] { scene.validate(); });
  check("geometry", [&] { geometry.validate(); });
  check("scene", [&] { check_antennas(scene, geometry); });

  for (std::size_t i = 0; i < frequencies_ghz.size(); ++i) {
    const double f = frequencies_ghz[i];
    if (!(f > 0.0) || !std::isfinite(f)) fail(index("frequencies_ghz", i), "must be positive and finite");
  }
  check("grid", [&] { grid.validate(); });
  for (std::size_t i = 0; i < sources.size(); ++i) {
    if (sources[i] < 1 || sources[i] > geometry.num_emitters) {
      fail(index("imaging.sources", i), "emitter index outside 1.." + std::to_string(geometry.num_emitters));
    }
  }
  check("truncation", [&] { truncation.validate(); });

  if (synthesis.quadrature_nodes < 16) fail("synthesis.quadrature_nodes", "must be at least 16");
  if (!(synthesis.noise >= 0.0) || !std::isfinite(synthesis.noise)) fail("synthesis.noise", "must be non-negative");

  if (input) {
    check("input.columns", [&] { input->columns.validate(); });
    if (!(input->angle_tolerance_deg > 0.0)) fail("input.angle_tolerance_deg", "must be positive");
  }

  if (!(analysis.x_max >= analysis.x_min)) fail("analysis.x_max", "must not be below x_min");
  if (analysis.points < 1) fail("analysis.points", "must be at least 1");
  if (analysis.points == 1 && analysis.x_max != analysis.x_min) {
    fail("analysis.points", "a single point needs x_min == x_max");
  }
  if (analysis.bound_terms < 1) fail("analysis.bound_terms", "must be at least 1");

  if (!(score.prominence >= 0.0 && score.prominence <= 1.0)) fail("score.prominence", "must lie in [0, 1]");
  for (std::size_t i = 0; i < score.thresholds.size(); ++i) {
    const double t = score.thresholds[i];
    if (!(t > 0.0 && t < 1.0)) fail(index("score.thresholds", i), "must lie in (0, 1)");
  }
  if (output.empty()) fail("output", "must not be empty");
}

RunConfig parse_config(const std::string& json_text) { return parse_with_base(json_text, {}); }

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("--config: cannot open " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_with_base(text.str(), path.parent_path());
}

std::filesystem::path measurement_path(const RunConfig& cfg, Frequency freq) {
  return cfg.output / ("meas_" + text::ghz_label(freq.ghz()) + ".csv");
}

}  // namespace osm::app
