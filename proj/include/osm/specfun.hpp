#pragma once

#include <complex>
#include <span>
#include <vector>

namespace osm::specfun {

inline constexpr double kEulerGamma = 0.57721566490153286;

/// Controls where the Bessel series are cut off.
///
/// In adaptive mode the series starts at order ceil(|x|) + 40 and is extended
/// until the last two retained J_p(x) fall below `tolerance`, never exceeding
/// `max_order`. In fixed mode exactly `max_order` terms are summed.
struct SeriesTruncation {
  int max_order = 10000;
  double tolerance = 1e-16;
  bool adaptive = true;

  static SeriesTruncation fixed(int order) { return {order, 1e-16, false}; }
  void validate() const;
};

/// J_p(x) for integer p >= 0.
double bessel_j(int p, double x);

/// J_0(x) .. J_max_order(x) from one normalized backward recurrence.
std::vector<double> bessel_j_sequence(int max_order, double x);

/// J_0(x) .. J_P(x) with P chosen by `trunc` for argument x.
std::vector<double> bessel_j_series(double x, const SeriesTruncation& trunc);

/// Y_0(x), x > 0.
double bessel_y0(double x);

/// H_0^(1)(x) = J_0(x) + i Y_0(x), x > 0.
std::complex<double> hankel1_0(double x);

/// Closed form of the arc integral  int_alpha^beta exp(i x cos(t - phi)) dt.
std::complex<double> jacobi_anger_arc(double alpha, double beta, double x, double phi,
                                      const SeriesTruncation& trunc = {});

/// sin(2 p pi / 3) with the multiples of three returning exactly zero.
double sin_two_thirds_pi(int p);

/// Limited-aperture disturbance factor for a 240 degree receiver arc:
///   sum_{p>=1} ((-i)^p / p) J_p(k d) cos(p (theta_m - phi)) sin(2 p pi / 3).
std::complex<double> disturb_factor(double dist, double k, double emitter_angle, double phi,
                                    const SeriesTruncation& trunc = {});

/// Multi-source factor  sum_{p>=1} (1/p) J_p(k d)^2 sin(2 p pi / 3).
///
/// Summing the single-source factor against the full emitter ring pairs the
/// (-i)^p of the arc expansion with the i^p of the ring expansion, so every
/// term is real. The often-quoted form with an extra i^p per term does not
/// match the multi-source indicator computed from data.
std::complex<double> multi_factor(double dist, double k, const SeriesTruncation& trunc = {});

/// (3/pi) |sum ((-i)^p / p) J_p(k|x|) sin(2 p pi / 3)| at each x.
std::vector<double> d1_curve(std::span<const double> xs, double k,
                             const SeriesTruncation& trunc = {});

/// (3/pi) |multi_factor(|x|, k)| at each x.
std::vector<double> d2_curve(std::span<const double> xs, double k,
                             const SeriesTruncation& trunc = {});

/// Euler-Maclaurin amplitude bound on the single-source factor:
///   sqrt(3 / (2 k d)) (ln N + gamma + 1/(2N)).
/// Throws BoundNotApplicable when k d <= 1/4.
double sidelobe_bound_e(double dist, double k, int n_terms);

/// Same bound for the multi-source factor:  sqrt(3) / (k d) (ln N + gamma + 1/(2N)).
double sidelobe_bound_m(double dist, double k, int n_terms);

}  // namespace osm::specfun
