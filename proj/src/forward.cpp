#include "osm/forward.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <tuple>

#include "osm/errors.hpp"
#include "osm/specfun.hpp"
#include "osm/text.hpp"

namespace osm {

void Scene::validate() const {
  medium.validate();
  if (scatterers.empty()) throw InvalidScene("scene has no scatterers");
  for (std::size_t i = 0; i < scatterers.size(); ++i) {
    const Scatterer& s = scatterers[i];
    const std::string tag = "scatterer " + std::to_string(i + 1);
    if (!(s.radius > 0.0)) throw InvalidScene(tag + ": radius must be positive");
    if (!(s.eps > 0.0)) throw InvalidScene(tag + ": permittivity must be positive");
    if (!std::isfinite(s.center.x) || !std::isfinite(s.center.y)) {
      throw InvalidScene(tag + ": center must be finite");
    }
    for (std::size_t j = 0; j < i; ++j) {
      const Scatterer& o = scatterers[j];
      if (distance(s.center, o.center) <= s.radius + o.radius) {
        throw InvalidScene(tag + " overlaps scatterer " + std::to_string(j + 1));
      }
    }
  }
}

double Scene::contrast(const Scatterer& s) const {
  return (s.eps - medium.eps_b) / (medium.eps_b * medium.mu_b);
}

Scene Scene::fresnel_two_disk(Point r1) {
  Scene scene;
  const double eps = 3.0 * scene.medium.eps_b;
  scene.scatterers = {{r1, 0.015, eps}, {{-0.045, 0.0}, 0.015, eps}};
  return scene;
}

void MeasurementSet::validate() const {
  geometry.validate();
  medium.validate();
  if (data.rows() != geometry.num_emitters || data.cols() != geometry.num_receivers) {
    throw InvalidInput("measurement matrix is " + std::to_string(data.rows()) + "x" +
                       std::to_string(data.cols()) + ", geometry needs " +
                       std::to_string(geometry.num_emitters) + "x" +
                       std::to_string(geometry.num_receivers));
  }
  for (const cplx& v : data.raw()) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
      throw InvalidInput("measurement matrix has non-finite entries");
    }
  }
}

cplx green(Point r, Point r2, double k) {
  const double d = distance(r, r2);
  if (!(d > 0.0)) throw DomainError("Green's function evaluated at coincident points");
  return cplx(0.0, -0.25) * specfun::hankel1_0(k * d);
}

void check_antennas(const Scene& scene, const ArrayGeometry& geom) {
  for (const Scatterer& s : scene.scatterers) {
    for (int m = 1; m <= geom.num_emitters; ++m) {
      if (distance(emitter_position(geom, m), s.center) <= s.radius) {
        throw InvalidScene("emitter " + std::to_string(m) + " lies inside a scatterer");
      }
      for (int n = 1; n <= geom.num_receivers; ++n) {
        if (distance(receiver_position(geom, m, n), s.center) <= s.radius) {
          throw InvalidScene("receiver (" + std::to_string(m) + ", " + std::to_string(n) +
                             ") lies inside a scatterer");
        }
      }
    }
  }
}

namespace {

MeasurementSet empty_set(const Scene& scene, const ArrayGeometry& geom, Frequency freq) {
  scene.validate();
  geom.validate();
  check_antennas(scene, geom);
  MeasurementSet ms;
  ms.geometry = geom;
  ms.freq = freq;
  ms.medium = scene.medium;
  ms.data = ComplexMatrix(geom.num_emitters, geom.num_receivers);
  return ms;
}

// Accumulates weight * G(b_n, r) G(r, a_m) into every entry for one source point.
void accumulate_point(MeasurementSet& ms, Point r, cplx weight, double k) {
  const ArrayGeometry& geom = ms.geometry;
  for (int m = 1; m <= geom.num_emitters; ++m) {
    const cplx g_emit = weight * green(r, emitter_position(geom, m), k);
    for (int n = 1; n <= geom.num_receivers; ++n) {
      ms.data(m - 1, n - 1) += green(receiver_position(geom, m, n), r, k) * g_emit;
    }
  }
}

}  // namespace

MeasurementSet born_field(const Scene& scene, const ArrayGeometry& geom, Frequency freq) {
  MeasurementSet ms = empty_set(scene, geom, freq);
  const double k = ms.wavenumber();
  for (const Scatterer& s : scene.scatterers) {
    accumulate_point(ms, s.center, k * k * s.area() * scene.contrast(s), k);
  }
  return ms;
}

GaussRule gauss_legendre(int n) {
  if (n < 1) throw InvalidInput("Gauss-Legendre rule needs n >= 1");
  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int j = 2; j <= n; ++j) {
        const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  return rule;
}

MeasurementSet quadrature_field(const Scene& scene, const ArrayGeometry& geom, Frequency freq,
                                int nodes_per_disk) {
  if (nodes_per_disk < 16) throw InvalidInput("quadrature_field needs at least 16 nodes per disk");
  MeasurementSet ms = empty_set(scene, geom, freq);
  const double k = ms.wavenumber();

  const int radial = std::max(2, static_cast<int>(std::lround(std::sqrt(nodes_per_disk / 2.0))));
  const int angular = std::max(8, nodes_per_disk / radial);
  const GaussRule rule = gauss_legendre(radial);

  for (const Scatterer& s : scene.scatterers) {
    const double scale = k * k * scene.contrast(s);
    for (int i = 0; i < radial; ++i) {
      const double rho = 0.5 * s.radius * (rule.nodes[i] + 1.0);
      const double w_r = 0.5 * s.radius * rule.weights[i] * rho;
      for (int j = 0; j < angular; ++j) {
        const double t = 2.0 * kPi * j / angular;
        const Point r = s.center + Point{rho * std::cos(t), rho * std::sin(t)};
        accumulate_point(ms, r, scale * w_r * (2.0 * kPi / angular), k);
      }
    }
  }
  return ms;
}

MeasurementSet add_noise(const MeasurementSet& ms, double relative_level, std::uint64_t seed) {
  if (!(relative_level >= 0.0)) throw InvalidInput("noise level must be non-negative");
  MeasurementSet out = ms;
  if (relative_level == 0.0 || ms.data.raw().empty()) return out;

  double power = 0.0;
  for (const cplx& v : ms.data.raw()) power += std::norm(v);
  const double rms = std::sqrt(power / ms.data.raw().size());
  const double sigma = relative_level * rms / std::sqrt(2.0);

  std::mt19937_64 gen(seed);
  std::normal_distribution<double> dist(0.0, 1.0);
  for (cplx& v : out.data.raw()) {
    const double re = dist(gen);
    const double im = dist(gen);
    v += cplx(sigma * re, sigma * im);
  }
  return out;
}

void write_measurement_csv(std::ostream& out, const MeasurementSet& ms) {
  using text::format_double;
  const ArrayGeometry& g = ms.geometry;
  out << "# osm measurement set\n"
      << "# frequency_hz = " << format_double(ms.freq.hz()) << '\n'
      << "# emitter_radius = " << format_double(g.emitter_radius) << '\n'
      << "# receiver_radius = " << format_double(g.receiver_radius) << '\n'
      << "# num_emitters = " << g.num_emitters << '\n'
      << "# num_receivers = " << g.num_receivers << '\n'
      << "# aperture_start = " << format_double(g.aperture_start) << '\n'
      << "# aperture_span = " << format_double(g.aperture_span) << '\n'
      << "# eps_b = " << format_double(ms.medium.eps_b) << '\n'
      << "# mu_b = " << format_double(ms.medium.mu_b) << '\n'
      << "m,n,re,im\n";
  for (int m = 0; m < ms.data.rows(); ++m) {
    for (int n = 0; n < ms.data.cols(); ++n) {
      const cplx v = ms.data(m, n);
      out << m + 1 << ',' << n + 1 << ',' << format_double(v.real()) << ',' << format_double(v.imag())
          << '\n';
    }
  }
}

void write_measurement_csv(const std::filesystem::path& path, const MeasurementSet& ms) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  write_measurement_csv(out, ms);
  if (!out) throw Error("failed writing " + path.string());
}

MeasurementSet read_measurement_csv(std::istream& in) {
  std::map<std::string, std::string, std::less<>> meta;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  std::vector<std::tuple<std::size_t, long, long, double, double>> rows;

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
    if (!header_seen) {
      if (view != "m,n,re,im") throw ParseError("expected header 'm,n,re,im'", line_no);
      header_seen = true;
      continue;
    }
    const auto fields = text::split(view, ',');
    if (fields.size() != 4) throw StructureError("expected 4 fields, got " + std::to_string(fields.size()), line_no);
    const auto m = text::parse_int(fields[0]);
    const auto n = text::parse_int(fields[1]);
    const auto re = text::parse_double(fields[2]);
    const auto im = text::parse_double(fields[3]);
    if (!m || !n || !re || !im) throw ParseError("malformed numeric field", line_no);
    rows.emplace_back(line_no, *m, *n, *re, *im);
  }

  auto need = [&](const char* key) -> double {
    const auto it = meta.find(key);
    if (it == meta.end()) throw ParseError(std::string("missing metadata '") + key + "'", line_no);
    const auto v = text::parse_double(it->second);
    if (!v) throw ParseError(std::string("malformed metadata '") + key + "'", line_no);
    return *v;
  };

  MeasurementSet ms;
  ms.freq = Frequency::hz(need("frequency_hz"));
  ms.geometry.emitter_radius = need("emitter_radius");
  ms.geometry.receiver_radius = need("receiver_radius");
  ms.geometry.num_emitters = static_cast<int>(need("num_emitters"));
  ms.geometry.num_receivers = static_cast<int>(need("num_receivers"));
  ms.geometry.aperture_start = need("aperture_start");
  ms.geometry.aperture_span = need("aperture_span");
  ms.medium.eps_b = need("eps_b");
  ms.medium.mu_b = need("mu_b");
  ms.geometry.validate();
  ms.medium.validate();

  const int rows_n = ms.geometry.num_emitters;
  const int cols_n = ms.geometry.num_receivers;
  ms.data = ComplexMatrix(rows_n, cols_n);
  std::vector<bool> seen(static_cast<std::size_t>(rows_n) * cols_n, false);
  for (const auto& [ln, m, n, re, im] : rows) {
    if (m < 1 || m > rows_n || n < 1 || n > cols_n) throw StructureError("index out of range", ln);
    const std::size_t idx = static_cast<std::size_t>(m - 1) * cols_n + (n - 1);
    if (seen[idx]) throw StructureError("duplicate entry", ln);
    seen[idx] = true;
    ms.data(static_cast<int>(m - 1), static_cast<int>(n - 1)) = cplx(re, im);
  }
  if (rows.size() != seen.size()) {
    throw StructureError("expected " + std::to_string(seen.size()) + " rows, got " + std::to_string(rows.size()),
                         line_no);
  }
  return ms;
}

MeasurementSet read_measurement_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open measurement file " + path.string());
  return read_measurement_csv(in);
}

}  // namespace osm
