#include "osm/fresnel_io.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include "osm/errors.hpp"
#include "osm/text.hpp"

namespace osm {

namespace {

double wrap_degrees(double deg) {
  double w = std::fmod(deg, 360.0);
  if (w < 0.0) w += 360.0;
  if (w >= 360.0) w = 0.0;
  return w;
}

// Signed angular difference a - b folded into (-180, 180].
double angle_diff(double a, double b) {
  double d = std::fmod(a - b, 360.0);
  if (d > 180.0) d -= 360.0;
  if (d <= -180.0) d += 360.0;
  return d;
}

bool starts_numeric(std::string_view s) {
  const char c = s.front();
  return std::isdigit(static_cast<unsigned char>(c)) || c == '-' || c == '+' || c == '.';
}

}  // namespace

void ColumnMap::validate() const {
  const std::array<int, 7> idx{tx_angle, rx_angle, freq, re_total, im_total, re_incident, im_incident};
  for (std::size_t i = 0; i < idx.size(); ++i) {
    if (idx[i] < 0 || idx[i] >= width) {
      throw InvalidInput("column map: index " + std::to_string(idx[i]) + " outside row width " +
                         std::to_string(width));
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (idx[i] == idx[j]) throw InvalidInput("column map: column " + std::to_string(idx[i]) + " used twice");
    }
  }
}

ColumnMap ColumnMap::parse(std::string_view spec) {
  ColumnMap cols;
  for (std::string_view item : text::split(spec, ',')) {
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string_view::npos) throw InvalidInput("column map: expected key=value, got '" + std::string(item) + "'");
    const std::string_view key = text::trim(item.substr(0, eq));
    const std::string_view val = text::trim(item.substr(eq + 1));
    if (key == "unit") {
      std::string lower(val);
      std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
      if (lower == "hz") cols.unit = FrequencyUnit::hz;
      else if (lower == "ghz") cols.unit = FrequencyUnit::ghz;
      else throw InvalidInput("column map: unknown frequency unit '" + std::string(val) + "'");
      continue;
    }
    const auto v = text::parse_int(val);
    if (!v) throw InvalidInput("column map: '" + std::string(key) + "' needs an integer");
    const int iv = static_cast<int>(*v);
    if (key == "tx") cols.tx_angle = iv;
    else if (key == "rx") cols.rx_angle = iv;
    else if (key == "freq") cols.freq = iv;
    else if (key == "re_tot") cols.re_total = iv;
    else if (key == "im_tot") cols.im_total = iv;
    else if (key == "re_inc") cols.re_incident = iv;
    else if (key == "im_inc") cols.im_incident = iv;
    else if (key == "width") cols.width = iv;
    else if (key == "conj") cols.conjugate = iv != 0;
    else throw InvalidInput("column map: unknown key '" + std::string(key) + "'");
  }
  cols.validate();
  return cols;
}

std::string ColumnMap::to_string() const {
  std::ostringstream os;
  os << "tx=" << tx_angle << ",rx=" << rx_angle << ",freq=" << freq << ",re_tot=" << re_total
     << ",im_tot=" << im_total << ",re_inc=" << re_incident << ",im_inc=" << im_incident
     << ",width=" << width << ",unit=" << (unit == FrequencyUnit::ghz ? "GHz" : "Hz")
     << ",conj=" << (conjugate ? 1 : 0);
  return os.str();
}

void for_each_record(std::istream& in, const ColumnMap& cols,
                     const std::function<void(const FresnelRecord&)>& sink) {
  cols.validate();
  std::string line;
  std::size_t line_no = 0;
  std::vector<double> values(static_cast<std::size_t>(cols.width));
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view view = text::trim(line);
    if (view.empty() || !starts_numeric(view)) continue;

    const auto fields = text::split_ws(view);
    if (static_cast<int>(fields.size()) != cols.width) {
      throw StructureError("expected " + std::to_string(cols.width) + " fields, got " +
                               std::to_string(fields.size()),
                           line_no);
    }
    for (std::size_t i = 0; i < fields.size(); ++i) {
      const auto v = text::parse_double(fields[i]);
      if (!v || !std::isfinite(*v)) {
        throw ParseError("malformed number '" + std::string(fields[i]) + "' in field " + std::to_string(i + 1),
                         line_no);
      }
      values[i] = *v;
    }

    FresnelRecord rec;
    rec.tx_angle = wrap_degrees(values[cols.tx_angle]);
    rec.rx_angle = wrap_degrees(values[cols.rx_angle]);
    rec.freq_hz = values[cols.freq] * (cols.unit == FrequencyUnit::ghz ? 1e9 : 1.0);
    if (!(rec.freq_hz > 0.0)) throw ParseError("frequency must be positive", line_no);
    rec.total = cplx(values[cols.re_total], values[cols.im_total]);
    rec.incident = cplx(values[cols.re_incident], values[cols.im_incident]);
    if (cols.conjugate) {
      rec.total = std::conj(rec.total);
      rec.incident = std::conj(rec.incident);
    }
    sink(rec);
  }
}

std::vector<FresnelRecord> parse_stream(std::istream& in, const ColumnMap& cols) {
  std::vector<FresnelRecord> out;
  for_each_record(in, cols, [&](const FresnelRecord& r) { out.push_back(r); });
  return out;
}

std::vector<FresnelRecord> parse_file(const std::filesystem::path& path, const ColumnMap& cols) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open measurement file " + path.string());
  return parse_stream(in, cols);
}

MeasurementSet assemble(std::span<const FresnelRecord> records, const ArrayGeometry& geom,
                        Frequency target, double angle_tol_deg, const Medium& medium) {
  geom.validate();
  if (!(angle_tol_deg > 0.0)) throw InvalidInput("angle tolerance must be positive");
  const int num_m = geom.num_emitters;
  const int num_n = geom.num_receivers;
  const double emitter_step = 360.0 / num_m;
  const double receiver_step = rad_to_deg(geom.receiver_step());
  const double start = rad_to_deg(geom.aperture_start);

  MeasurementSet ms;
  ms.geometry = geom;
  ms.freq = target;
  ms.medium = medium;
  ms.data = ComplexMatrix(num_m, num_n);
  std::vector<bool> seen(static_cast<std::size_t>(num_m) * num_n, false);

  for (const FresnelRecord& rec : records) {
    if (std::abs(rec.freq_hz - target.hz()) > 1e-6 * target.hz()) continue;

    const long m0 = std::lround(rec.tx_angle / emitter_step);
    if (std::abs(angle_diff(rec.tx_angle, m0 * emitter_step)) > angle_tol_deg) continue;
    const int m = static_cast<int>(m0 % num_m);  // 0-based

    double rel = wrap_degrees(rec.rx_angle - m * emitter_step - start);
    if (rel > 360.0 - angle_tol_deg) rel -= 360.0;
    const long n0 = std::lround(rel / receiver_step);
    if (n0 < 0 || n0 >= num_n || std::abs(rel - n0 * receiver_step) > angle_tol_deg) continue;
    const int n = static_cast<int>(n0);

    const std::size_t idx = static_cast<std::size_t>(m) * num_n + n;
    if (seen[idx]) {
      throw AmbiguityError("more than one record for emitter " + std::to_string(m + 1) + ", receiver " +
                           std::to_string(n + 1));
    }
    seen[idx] = true;
    ms.data(m, n) = rec.total - rec.incident;
  }

  std::string missing;
  std::size_t missing_count = 0;
  for (int m = 0; m < num_m; ++m) {
    for (int n = 0; n < num_n; ++n) {
      if (seen[static_cast<std::size_t>(m) * num_n + n]) continue;
      if (missing_count < 20) missing += " (" + std::to_string(m + 1) + ", " + std::to_string(n + 1) + ")";
      ++missing_count;
    }
  }
  if (missing_count > 0) {
    throw CoverageError(std::to_string(missing_count) + " (emitter, receiver) pairs missing:" + missing +
                        (missing_count > 20 ? " ..." : ""));
  }
  return ms;
}

void write_fresnel_file(std::ostream& out, const MeasurementSet& ms, const ColumnMap& cols) {
  cols.validate();
  ms.validate();
  const double k = ms.wavenumber();
  const ArrayGeometry& geom = ms.geometry;
  const double freq_value = cols.unit == FrequencyUnit::ghz ? ms.freq.ghz() : ms.freq.hz();

  out << "# synthetic Fresnel-style measurement\n"
      << "# columns: " << cols.to_string() << '\n';
  std::vector<std::string> fields(static_cast<std::size_t>(cols.width), "0");
  for (int m = 1; m <= geom.num_emitters; ++m) {
    const Point a = emitter_position(geom, m);
    for (int n = 1; n <= geom.num_receivers; ++n) {
      const cplx inc = green(receiver_position(geom, m, n), a, k);
      cplx tot = inc + ms.sample(m, n);
      cplx inc_out = inc;
      if (cols.conjugate) {
        tot = std::conj(tot);
        inc_out = std::conj(inc_out);
      }
      fields[cols.tx_angle] = text::format_double(wrap_degrees(rad_to_deg(geom.emitter_angle(m))));
      fields[cols.rx_angle] = text::format_double(wrap_degrees(rad_to_deg(geom.receiver_angle(m, n))));
      fields[cols.freq] = text::format_double(freq_value);
      fields[cols.re_total] = text::format_double(tot.real());
      fields[cols.im_total] = text::format_double(tot.imag());
      fields[cols.re_incident] = text::format_double(inc_out.real());
      fields[cols.im_incident] = text::format_double(inc_out.imag());
      for (std::size_t i = 0; i < fields.size(); ++i) out << (i ? " " : "") << fields[i];
      out << '\n';
    }
  }
}

void write_fresnel_file(const std::filesystem::path& path, const MeasurementSet& ms, const ColumnMap& cols) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  write_fresnel_file(out, ms, cols);
  if (!out) throw Error("failed writing " + path.string());
}

}  // namespace osm
