#pragma once

#include <cmath>
#include <numbers>

namespace osm {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kVacuumPermittivity = 8.854e-12;        // F/m
inline constexpr double kVacuumPermeability = 4.0 * kPi * 1e-7;  // H/m

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
  friend Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
  friend Point operator*(double s, Point a) { return {s * a.x, s * a.y}; }
  friend bool operator==(Point a, Point b) = default;
};

inline double norm(Point p) { return std::hypot(p.x, p.y); }
inline double distance(Point a, Point b) { return norm(a - b); }

/// Rotates `p` about the origin by `angle` radians.
inline Point rotate(Point p, double angle) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  return {c * p.x - s * p.y, s * p.x + c * p.y};
}

/// Homogeneous lossless background. Conductivity is identically zero.
struct Medium {
  double eps_b = kVacuumPermittivity;
  double mu_b = kVacuumPermeability;

  static Medium free_space() { return {}; }
  void validate() const;
};

/// Strictly positive temporal frequency.
class Frequency {
 public:
  static Frequency hz(double f);
  static Frequency ghz(double f) { return hz(f * 1e9); }

  double hz() const noexcept { return hz_; }
  double ghz() const noexcept { return hz_ * 1e-9; }
  double omega() const noexcept { return 2.0 * kPi * hz_; }

  friend bool operator==(Frequency, Frequency) = default;

 private:
  explicit Frequency(double f) : hz_(f) {}
  double hz_;
};

/// Emitter ring plus the limited receiver arc that travels with each emitter.
///
/// Emitter m (1-based) sits at angle 2(m-1)pi/M on the emitter ring. For that
/// emitter, receiver n (1-based) sits at
///   angle(m) + aperture_start + (n-1) * aperture_span / (N-1)
/// on the receiver ring. The defaults reproduce the Fresnel rig: 36 emitters,
/// 49 receivers spanning 60..300 degrees relative to the emitter in 5 degree
/// steps.
struct ArrayGeometry {
  double emitter_radius = 0.72;
  double receiver_radius = 0.76;
  int num_emitters = 36;
  int num_receivers = 49;
  double aperture_start = kPi / 3.0;
  double aperture_span = 4.0 * kPi / 3.0;

  void validate() const;

  double emitter_angle(int m) const;
  double receiver_angle(int m, int n) const;
  double receiver_step() const { return aperture_span / (num_receivers - 1); }

  friend bool operator==(const ArrayGeometry&, const ArrayGeometry&) = default;
};

/// Background wavenumber omega * sqrt(eps_b * mu_b) in rad/m.
double wavenumber(Frequency freq, const Medium& medium = Medium::free_space());

/// 2 pi / k.
double wavelength(Frequency freq, const Medium& medium = Medium::free_space());

Point emitter_position(const ArrayGeometry& geom, int m);
Point receiver_position(const ArrayGeometry& geom, int m, int n);

inline double deg_to_rad(double deg) { return deg * kPi / 180.0; }
inline double rad_to_deg(double rad) { return rad * 180.0 / kPi; }

}  // namespace osm
