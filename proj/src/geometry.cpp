#include "osm/geometry.hpp"

#include <string>

#include "osm/errors.hpp"

namespace osm {

void Medium::validate() const {
  if (!(eps_b > 0.0) || !std::isfinite(eps_b)) {
    throw InvalidInput("medium: eps_b must be positive, got " + std::to_string(eps_b));
  }
  if (!(mu_b > 0.0) || !std::isfinite(mu_b)) {
    throw InvalidInput("medium: mu_b must be positive, got " + std::to_string(mu_b));
  }
}

Frequency Frequency::hz(double f) {
  if (!(f > 0.0) || !std::isfinite(f)) {
    throw InvalidInput("frequency must be positive and finite, got " + std::to_string(f));
  }
  return Frequency(f);
}

void ArrayGeometry::validate() const {
  if (!(emitter_radius > 0.0)) throw InvalidInput("geometry: emitter radius must be positive");
  if (!(receiver_radius > 0.0)) throw InvalidInput("geometry: receiver radius must be positive");
  if (num_emitters < 1) throw InvalidInput("geometry: need at least one emitter");
  if (num_receivers < 2) throw InvalidInput("geometry: need at least two receivers");
  if (!(aperture_span > 0.0) || aperture_span > 2.0 * kPi + 1e-12) {
    throw InvalidInput("geometry: aperture span must lie in (0, 2pi]");
  }
  if (!std::isfinite(aperture_start)) throw InvalidInput("geometry: aperture start must be finite");
}

double ArrayGeometry::emitter_angle(int m) const {
  if (m < 1 || m > num_emitters) {
    throw InvalidInput("emitter index " + std::to_string(m) + " outside 1.." +
                       std::to_string(num_emitters));
  }
  return 2.0 * (m - 1) * kPi / num_emitters;
}

double ArrayGeometry::receiver_angle(int m, int n) const {
  if (n < 1 || n > num_receivers) {
    throw InvalidInput("receiver index " + std::to_string(n) + " outside 1.." +
                       std::to_string(num_receivers));
  }
  return emitter_angle(m) + aperture_start + (n - 1) * receiver_step();
}

double wavenumber(Frequency freq, const Medium& medium) {
  medium.validate();
  return freq.omega() * std::sqrt(medium.eps_b * medium.mu_b);
}

double wavelength(Frequency freq, const Medium& medium) {
  return 2.0 * kPi / wavenumber(freq, medium);
}

Point emitter_position(const ArrayGeometry& geom, int m) {
  const double t = geom.emitter_angle(m);
  return {geom.emitter_radius * std::cos(t), geom.emitter_radius * std::sin(t)};
}

Point receiver_position(const ArrayGeometry& geom, int m, int n) {
  const double t = geom.receiver_angle(m, n);
  return {geom.receiver_radius * std::cos(t), geom.receiver_radius * std::sin(t)};
}

}  // namespace osm
