#include "osm/imaging.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>

#include "osm/errors.hpp"
#include "osm/text.hpp"

namespace osm {

void ImagingGrid::validate() const {
  if (!(x_max > x_min) || !(y_max > y_min)) throw InvalidInput("imaging grid: empty extent");
  if (nx < 2 || ny < 2) throw InvalidInput("imaging grid: need at least 2 cells per axis");
}

std::string to_string(MapKind kind) {
  switch (kind) {
    case MapKind::osm: return "osm";
    case MapKind::osmm: return "osmm";
    case MapKind::mosm: return "mosm";
    case MapKind::analytic_single: return "analytic-single";
    case MapKind::analytic_multi: return "analytic-multi";
  }
  return "unknown";
}

MapKind parse_map_kind(std::string_view name) {
  for (MapKind k : {MapKind::osm, MapKind::osmm, MapKind::mosm, MapKind::analytic_single, MapKind::analytic_multi}) {
    if (to_string(k) == name) return k;
  }
  throw InvalidInput("unknown indicator kind '" + std::string(name) + "'");
}

double IndicatorMap::max() const {
  return values.empty() ? 0.0 : *std::max_element(values.begin(), values.end());
}

std::size_t IndicatorMap::argmax() const {
  return static_cast<std::size_t>(std::max_element(values.begin(), values.end()) - values.begin());
}

namespace {

// Emitter-major table of receiver positions, with receivers that coincide
// across emitters collapsed onto one slot.
struct ReceiverTable {
  std::vector<Point> unique;
  std::vector<int> slot;  // [m * N + n] -> index into unique
};

ReceiverTable build_receiver_table(const ArrayGeometry& geom) {
  ReceiverTable table;
  std::map<long long, int> by_angle;
  for (int m = 1; m <= geom.num_emitters; ++m) {
    for (int n = 1; n <= geom.num_receivers; ++n) {
      double t = std::fmod(geom.receiver_angle(m, n), 2.0 * kPi);
      if (t < 0.0) t += 2.0 * kPi;
      const long long key = std::llround(t * 1e9) % std::llround(2.0 * kPi * 1e9);
      auto [it, inserted] = by_angle.emplace(key, static_cast<int>(table.unique.size()));
      if (inserted) table.unique.push_back(receiver_position(geom, m, n));
      table.slot.push_back(it->second);
    }
  }
  return table;
}

IndicatorMap blank_map(const ImagingGrid& grid, MapKind kind, int source, Frequency freq) {
  grid.validate();
  IndicatorMap map;
  map.grid = grid;
  map.values.assign(grid.size(), 0.0);
  map.kind = kind;
  map.source = source;
  map.freq = freq;
  return map;
}

// Calls sink(cell, phis) with Phi(r', a_m) for all emitters at each cell.
template <typename Sink>
void scan_phi(const MeasurementSet& ms, const ImagingGrid& grid, Sink&& sink) {
  ms.validate();
  grid.validate();
  const ArrayGeometry& geom = ms.geometry;
  const double k = ms.wavenumber();
  const ReceiverTable table = build_receiver_table(geom);
  const int num_m = geom.num_emitters;
  const int num_n = geom.num_receivers;

  std::vector<cplx> test(table.unique.size());
  std::vector<cplx> phis(static_cast<std::size_t>(num_m));
  for (std::size_t cell = 0; cell < grid.size(); ++cell) {
    const Point r = grid.point(cell);
    for (std::size_t u = 0; u < table.unique.size(); ++u) test[u] = std::conj(green(table.unique[u], r, k));
    for (int m = 0; m < num_m; ++m) {
      cplx acc = 0.0;
      for (int n = 0; n < num_n; ++n) acc += ms.data(m, n) * test[table.slot[static_cast<std::size_t>(m) * num_n + n]];
      phis[m] = acc;
    }
    sink(cell, phis);
  }
}

}  // namespace

ComplexFieldMap phi_map(const MeasurementSet& ms, int m, const ImagingGrid& grid) {
  ms.validate();
  grid.validate();
  const ArrayGeometry& geom = ms.geometry;
  geom.emitter_angle(m);  // range check
  const double k = ms.wavenumber();

  std::vector<Point> receivers;
  for (int n = 1; n <= geom.num_receivers; ++n) receivers.push_back(receiver_position(geom, m, n));

  ComplexFieldMap out{grid, std::vector<cplx>(grid.size()), m};
  for (std::size_t cell = 0; cell < grid.size(); ++cell) {
    const Point r = grid.point(cell);
    cplx acc = 0.0;
    for (int n = 0; n < geom.num_receivers; ++n) acc += ms.data(m - 1, n) * std::conj(green(receivers[n], r, k));
    out.values[cell] = acc;
  }
  return out;
}

std::vector<ComplexFieldMap> phi_maps(const MeasurementSet& ms, const ImagingGrid& grid) {
  std::vector<ComplexFieldMap> out;
  for (int m = 1; m <= ms.geometry.num_emitters; ++m) out.push_back({grid, std::vector<cplx>(grid.size()), m});
  scan_phi(ms, grid, [&](std::size_t cell, const std::vector<cplx>& phis) {
    for (std::size_t m = 0; m < phis.size(); ++m) out[m].values[cell] = phis[m];
  });
  return out;
}

IndicatorMap osm_map(const MeasurementSet& ms, int m, const ImagingGrid& grid) {
  const ComplexFieldMap phi = phi_map(ms, m, grid);
  IndicatorMap map = blank_map(grid, MapKind::osm, m, ms.freq);
  for (std::size_t i = 0; i < phi.values.size(); ++i) map.values[i] = std::abs(phi.values[i]);
  return map;
}

IndicatorMap osmm_map(const MeasurementSet& ms, const ImagingGrid& grid) {
  IndicatorMap map = blank_map(grid, MapKind::osmm, 0, ms.freq);
  scan_phi(ms, grid, [&](std::size_t cell, const std::vector<cplx>& phis) {
    double sum = 0.0;
    for (const cplx& p : phis) sum += std::abs(p);
    map.values[cell] = sum;
  });
  return map;
}

IndicatorMap mosm_map(const MeasurementSet& ms, const ImagingGrid& grid) {
  IndicatorMap map = blank_map(grid, MapKind::mosm, 0, ms.freq);
  const ArrayGeometry& geom = ms.geometry;
  const double k = ms.wavenumber();
  std::vector<Point> emitters;
  for (int m = 1; m <= geom.num_emitters; ++m) emitters.push_back(emitter_position(geom, m));

  scan_phi(ms, grid, [&](std::size_t cell, const std::vector<cplx>& phis) {
    const Point r = grid.point(cell);
    cplx acc = 0.0;
    for (std::size_t m = 0; m < phis.size(); ++m) acc += phis[m] * std::conj(green(r, emitters[m], k));
    map.values[cell] = std::abs(acc);
  });
  return map;
}

IndicatorMap analytic_single_map(const Scene& scene, const ArrayGeometry& geom, int m, Frequency freq,
                                 const ImagingGrid& grid, const specfun::SeriesTruncation& trunc) {
  scene.validate();
  geom.validate();
  const double k = wavenumber(freq, scene.medium);
  const Point a = emitter_position(geom, m);
  const double theta_m = geom.emitter_angle(m);
  const double prefactor = k / (6.0 * geom.receiver_radius);

  std::vector<cplx> weights;
  for (const Scatterer& s : scene.scatterers) {
    weights.push_back(s.area() * scene.contrast(s) * green(s.center, a, k));
  }

  IndicatorMap map = blank_map(grid, MapKind::analytic_single, m, freq);
  for (std::size_t cell = 0; cell < grid.size(); ++cell) {
    const Point r = grid.point(cell);
    cplx acc = 0.0;
    for (std::size_t s = 0; s < scene.scatterers.size(); ++s) {
      const Point d = r - scene.scatterers[s].center;
      const double dist = norm(d);
      const double phi = dist > 0.0 ? std::atan2(d.y, d.x) : 0.0;
      const cplx bracket = specfun::bessel_j(0, k * dist) +
                           3.0 / kPi * specfun::disturb_factor(dist, k, theta_m, phi, trunc);
      acc += weights[s] * bracket;
    }
    map.values[cell] = prefactor * std::abs(acc);
  }
  return map;
}

IndicatorMap analytic_multi_map(const Scene& scene, const ArrayGeometry& geom, Frequency freq,
                                const ImagingGrid& grid, const specfun::SeriesTruncation& trunc) {
  scene.validate();
  geom.validate();
  const double k = wavenumber(freq, scene.medium);
  const double prefactor = 2.0 / (3.0 * geom.emitter_radius * geom.receiver_radius);

  IndicatorMap map = blank_map(grid, MapKind::analytic_multi, 0, freq);
  for (std::size_t cell = 0; cell < grid.size(); ++cell) {
    const Point r = grid.point(cell);
    cplx acc = 0.0;
    for (const Scatterer& s : scene.scatterers) {
      const double dist = distance(r, s.center);
      const double j0 = specfun::bessel_j(0, k * dist);
      acc += s.area() * scene.contrast(s) * (j0 * j0 + 3.0 / kPi * specfun::multi_factor(dist, k, trunc));
    }
    map.values[cell] = prefactor * std::abs(acc);
  }
  return map;
}

IndicatorMap normalize(const IndicatorMap& map) {
  const double peak = map.max();
  if (!(peak > 0.0)) throw DegenerateError("cannot normalize an all-zero indicator map");
  IndicatorMap out = map;
  for (double& v : out.values) v /= peak;
  return out;
}

double relative_l2(const IndicatorMap& map, const IndicatorMap& reference) {
  if (!(map.grid == reference.grid)) throw InvalidInput("relative_l2: grids differ");
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < map.values.size(); ++i) {
    const double d = map.values[i] - reference.values[i];
    num += d * d;
    den += reference.values[i] * reference.values[i];
  }
  if (!(den > 0.0)) throw DegenerateError("relative_l2: reference map is all zero");
  return std::sqrt(num / den);
}

std::string map_stem(const IndicatorMap& map) {
  const std::string src = map.source > 0 ? std::to_string(map.source) : "all";
  return to_string(map.kind) + "_" + text::ghz_label(map.freq.ghz()) + "_" + src;
}

void write_map_csv(std::ostream& out, const IndicatorMap& map) {
  using text::format_double;
  const ImagingGrid& g = map.grid;
  out << "# osm indicator map\n"
      << "# kind = " << to_string(map.kind) << '\n'
      << "# source = " << map.source << '\n'
      << "# frequency_hz = " << format_double(map.freq.hz()) << '\n'
      << "# x_min = " << format_double(g.x_min) << '\n'
      << "# x_max = " << format_double(g.x_max) << '\n'
      << "# y_min = " << format_double(g.y_min) << '\n'
      << "# y_max = " << format_double(g.y_max) << '\n'
      << "# nx = " << g.nx << '\n'
      << "# ny = " << g.ny << '\n'
      << "# rows run from y_min upward; columns from x_min rightward\n";
  for (int iy = 0; iy < g.ny; ++iy) {
    for (int ix = 0; ix < g.nx; ++ix) out << (ix ? "," : "") << format_double(map.at(ix, iy));
    out << '\n';
  }
}

void write_map_csv(const std::filesystem::path& path, const IndicatorMap& map) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  write_map_csv(out, map);
  if (!out) throw Error("failed writing " + path.string());
}

IndicatorMap read_map_csv(std::istream& in) {
  std::map<std::string, std::string, std::less<>> meta;
  std::vector<double> values;
  std::string line;
  std::size_t line_no = 0;
  std::size_t width = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view view = text::trim(line);
    if (view.empty()) continue;
    if (view.front() == '#') {
      const auto eq = view.find('=');
      if (eq != std::string_view::npos) {
        meta.emplace(std::string(text::trim(view.substr(1, eq - 1))), std::string(text::trim(view.substr(eq + 1))));
      }
      continue;
    }
    const auto fields = text::split(view, ',');
    if (width == 0) width = fields.size();
    if (fields.size() != width) throw StructureError("inconsistent row width", line_no);
    for (std::string_view f : fields) {
      const auto v = text::parse_double(f);
      if (!v) throw ParseError("malformed value '" + std::string(f) + "'", line_no);
      values.push_back(*v);
    }
  }
  auto need = [&](const char* key) -> std::string {
    const auto it = meta.find(key);
    if (it == meta.end()) throw ParseError(std::string("missing metadata '") + key + "'", line_no);
    return it->second;
  };
  auto need_num = [&](const char* key) {
    const auto v = text::parse_double(need(key));
    if (!v) throw ParseError(std::string("malformed metadata '") + key + "'", line_no);
    return *v;
  };

  IndicatorMap map;
  map.kind = parse_map_kind(need("kind"));
  map.source = static_cast<int>(need_num("source"));
  map.freq = Frequency::hz(need_num("frequency_hz"));
  map.grid = {need_num("x_min"), need_num("x_max"), need_num("y_min"), need_num("y_max"),
              static_cast<int>(need_num("nx")), static_cast<int>(need_num("ny"))};
  map.grid.validate();
  if (width != static_cast<std::size_t>(map.grid.nx) || values.size() != map.grid.size()) {
    throw StructureError("map body does not match nx x ny", line_no);
  }
  map.values = std::move(values);
  return map;
}

IndicatorMap read_map_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open map file " + path.string());
  return read_map_csv(in);
}

void write_pgm(std::ostream& out, const IndicatorMap& map) {
  const ImagingGrid& g = map.grid;
  const double peak = map.max();
  out << "P5\n" << g.nx << ' ' << g.ny << "\n255\n";
  std::vector<unsigned char> row(static_cast<std::size_t>(g.nx));
  for (int iy = g.ny - 1; iy >= 0; --iy) {
    for (int ix = 0; ix < g.nx; ++ix) {
      const double v = peak > 0.0 ? map.at(ix, iy) / peak : 0.0;
      row[ix] = static_cast<unsigned char>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0));
    }
    out.write(reinterpret_cast<const char*>(row.data()), static_cast<std::streamsize>(row.size()));
  }
}

void write_pgm(const std::filesystem::path& path, const IndicatorMap& map) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  write_pgm(out, map);
  if (!out) throw Error("failed writing " + path.string());
}

}  // namespace osm
