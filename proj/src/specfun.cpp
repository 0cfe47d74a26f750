#include "osm/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "osm/errors.hpp"

namespace osm::specfun {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kRescaleAbove = 1e250;
constexpr double kRescaleBy = 1e-250;
// Below this argument Y_0 comes from the Neumann series over Miller-normalized
// J_{2k}; above it the Hankel asymptotic expansion is already at machine
// precision (its smallest term is about exp(-2x)).
constexpr double kAsymptoticFrom = 25.0;

// i^p for integer p >= 0.
std::complex<double> i_pow(int p) {
  switch (p & 3) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

std::complex<double> minus_i_pow(int p) { return std::conj(i_pow(p)); }

// Normalized J_0..J_start(|x|) by Miller's backward recurrence with the
// Neumann identity J_0 + 2 sum J_{2k} = 1. `min_order` is the highest order
// the caller needs; the start order is pushed far enough past both it and
// |x| that the seed error is below double precision.
std::vector<double> miller(int min_order, double ax) {
  int start = std::max(min_order, static_cast<int>(std::ceil(ax))) + 30 +
              static_cast<int>(std::ceil(20.0 * std::cbrt(ax)));
  if (start % 2 != 0) ++start;

  std::vector<double> j(static_cast<std::size_t>(start) + 2, 0.0);
  j[start] = 1.0;
  for (int k = start; k >= 1; --k) {
    j[k - 1] = (2.0 * k / ax) * j[k] - j[k + 1];
    if (std::abs(j[k - 1]) > kRescaleAbove) {
      for (int q = k - 1; q <= start; ++q) j[q] *= kRescaleBy;
    }
  }

  double norm = 0.0;
  for (int k = start; k >= 2; k -= 2) norm += j[k];
  norm = j[0] + 2.0 * norm;
  for (double& v : j) v /= norm;
  return j;
}

void require_finite(double x, const char* what) {
  if (!std::isfinite(x)) throw InvalidInput(std::string(what) + " must be finite");
}

double harmonic_bound(int n_terms) {
  if (n_terms < 1) throw InvalidInput("sidelobe bound needs at least one term");
  return std::log(static_cast<double>(n_terms)) + kEulerGamma + 0.5 / n_terms;
}

void require_bound_applicable(double kd) {
  if (!(kd > 0.25)) {
    throw BoundNotApplicable("sidelobe bound needs k|r'-r| > 1/4, got " + std::to_string(kd));
  }
}

}  // namespace

void SeriesTruncation::validate() const {
  if (max_order < 1) throw InvalidInput("series truncation: max_order must be >= 1");
  if (!(tolerance > 0.0)) throw InvalidInput("series truncation: tolerance must be positive");
}

double sin_two_thirds_pi(int p) {
  static const double half_root3 = std::sqrt(3.0) / 2.0;
  switch (((p % 3) + 3) % 3) {
    case 1: return half_root3;
    case 2: return -half_root3;
    default: return 0.0;
  }
}

std::vector<double> bessel_j_sequence(int max_order, double x) {
  require_finite(x, "Bessel argument");
  if (max_order < 0) throw InvalidInput("Bessel order must be non-negative");

  std::vector<double> out(static_cast<std::size_t>(max_order) + 1, 0.0);
  if (x == 0.0) {
    out[0] = 1.0;
    return out;
  }
  const std::vector<double> j = miller(max_order, std::abs(x));
  std::copy_n(j.begin(), out.size(), out.begin());
  if (x < 0.0) {
    for (int p = 1; p <= max_order; p += 2) out[p] = -out[p];
  }
  return out;
}

double bessel_j(int p, double x) {
  if (p < 0) throw InvalidInput("Bessel order must be non-negative");
  return bessel_j_sequence(p, x)[static_cast<std::size_t>(p)];
}

std::vector<double> bessel_j_series(double x, const SeriesTruncation& trunc) {
  trunc.validate();
  if (!trunc.adaptive) return bessel_j_sequence(trunc.max_order, x);

  int order = std::min(trunc.max_order, static_cast<int>(std::ceil(std::abs(x))) + 40);
  for (;;) {
    std::vector<double> j = bessel_j_sequence(order, x);
    const bool converged = std::abs(j[order]) < trunc.tolerance &&
                           std::abs(j[order - 1]) < trunc.tolerance;
    if (converged || order >= trunc.max_order) return j;
    order = std::min(trunc.max_order, order + std::max(20, order / 2));
  }
}

double bessel_y0(double x) {
  require_finite(x, "Y0 argument");
  if (!(x > 0.0)) throw DomainError("Y0 requires x > 0, got " + std::to_string(x));
  return hankel1_0(x).imag();
}

std::complex<double> hankel1_0(double x) {
  require_finite(x, "H0 argument");
  if (!(x > 0.0)) throw DomainError("H0 requires x > 0, got " + std::to_string(x));

  if (x < kAsymptoticFrom) {
    const std::vector<double> j = miller(0, x);
    double neumann = 0.0;
    const int top = static_cast<int>(j.size()) - 1;
    for (int k = 1; 2 * k <= top; ++k) {
      neumann += ((k % 2 == 0) ? 1.0 : -1.0) * j[2 * k] / k;
    }
    const double y0 = (2.0 / kPi) * (std::log(0.5 * x) + kEulerGamma) * j[0] - (4.0 / kPi) * neumann;
    return {j[0], y0};
  }

  // H_0^(1)(x) ~ sqrt(2/(pi x)) e^{i(x - pi/4)} sum_k a_k (i/x)^k,
  // a_k = a_{k-1} * (-(2k-1)^2) / (8k).
  std::complex<double> sum = 1.0;
  std::complex<double> term = 1.0;
  const std::complex<double> step{0.0, 1.0 / x};
  double last = 1.0;
  for (int k = 1; k < 200; ++k) {
    const double a_ratio = -static_cast<double>((2 * k - 1) * (2 * k - 1)) / (8.0 * k);
    term *= a_ratio * step;
    const double mag = std::abs(term);
    if (mag > last) break;
    sum += term;
    if (mag < 1e-17) break;
    last = mag;
  }
  const double phase = x - 0.25 * kPi;
  return std::sqrt(2.0 / (kPi * x)) * std::complex<double>(std::cos(phase), std::sin(phase)) * sum;
}

std::complex<double> jacobi_anger_arc(double alpha, double beta, double x, double phi,
                                      const SeriesTruncation& trunc) {
  require_finite(alpha, "alpha");
  require_finite(beta, "beta");
  require_finite(phi, "phi");
  if (!(beta > alpha)) throw InvalidInput("jacobi_anger_arc requires beta > alpha");

  const std::vector<double> j = bessel_j_series(x, trunc);
  const double mid = 0.5 * (beta + alpha - 2.0 * phi);
  const double half_span = 0.5 * (beta - alpha);
  std::complex<double> sum = 0.0;
  for (int p = 1; p < static_cast<int>(j.size()); ++p) {
    sum += i_pow(p) * (j[p] / p * std::cos(p * mid) * std::sin(p * half_span));
  }
  return (beta - alpha) * j[0] + 4.0 * sum;
}

std::complex<double> disturb_factor(double dist, double k, double emitter_angle, double phi,
                                    const SeriesTruncation& trunc) {
  if (!(dist >= 0.0)) throw InvalidInput("disturb_factor requires dist >= 0");
  const std::vector<double> j = bessel_j_series(k * dist, trunc);
  const double delta = emitter_angle - phi;
  std::complex<double> sum = 0.0;
  for (int p = 1; p < static_cast<int>(j.size()); ++p) {
    const double s = sin_two_thirds_pi(p);
    if (s == 0.0) continue;
    sum += minus_i_pow(p) * (j[p] / p * std::cos(p * delta) * s);
  }
  return sum;
}

std::complex<double> multi_factor(double dist, double k, const SeriesTruncation& trunc) {
  if (!(dist >= 0.0)) throw InvalidInput("multi_factor requires dist >= 0");
  const std::vector<double> j = bessel_j_series(k * dist, trunc);
  std::complex<double> sum = 0.0;
  for (int p = 1; p < static_cast<int>(j.size()); ++p) {
    const double s = sin_two_thirds_pi(p);
    if (s == 0.0) continue;
    sum += j[p] * j[p] / p * s;
  }
  return sum;
}

std::vector<double> d1_curve(std::span<const double> xs, double k, const SeriesTruncation& trunc) {
  std::vector<double> out;
  out.reserve(xs.size());
  for (double x : xs) out.push_back(3.0 / kPi * std::abs(disturb_factor(std::abs(x), k, 0.0, 0.0, trunc)));
  return out;
}

std::vector<double> d2_curve(std::span<const double> xs, double k, const SeriesTruncation& trunc) {
  std::vector<double> out;
  out.reserve(xs.size());
  for (double x : xs) out.push_back(3.0 / kPi * std::abs(multi_factor(std::abs(x), k, trunc)));
  return out;
}

double sidelobe_bound_e(double dist, double k, int n_terms) {
  const double kd = k * dist;
  require_bound_applicable(kd);
  return std::sqrt(3.0 / (2.0 * kd)) * harmonic_bound(n_terms);
}

double sidelobe_bound_m(double dist, double k, int n_terms) {
  const double kd = k * dist;
  require_bound_applicable(kd);
  return std::sqrt(3.0) / kd * harmonic_bound(n_terms);
}

}  // namespace osm::specfun
