#pragma once

#include <cmath>
#include <limits>
#include <numbers>
#include <utility>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace lundberg::num {

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

inline double norm_pdf(double z) {
  return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
}

inline double norm_cdf(double z) {
  return 0.5 * std::erfc(-z / std::numbers::sqrt2);
}

/// Upper tail 1 - Phi(z).
inline double norm_sf(double z) {
  return 0.5 * std::erfc(z / std::numbers::sqrt2);
}

/// log(1 - Phi(z)), stable far into the tail. erfc underflows around z ~ 37.5;
/// past z = 35 switch to the Mills-ratio expansion
///   1 - Phi(z) = phi(z)/z * (1 - 1/z^2 + 3/z^4 - 15/z^6 + 105/z^8 - ...)
/// whose truncation error is ~1e-13 relative there.
inline double log_norm_sf(double z) {
  if (z < 35.0) return std::log(norm_sf(z));
  const double z2 = z * z;
  const double z4 = z2 * z2;
  const double series = 1.0 - 1.0 / z2 + 3.0 / z4 - 15.0 / (z4 * z2) + 105.0 / (z4 * z4);
  return -0.5 * z2 - 0.5 * std::log(2.0 * std::numbers::pi) - std::log(z) +
         std::log(series);
}

inline double log_norm_cdf(double z) { return log_norm_sf(-z); }

/// Adaptive Gauss-Kronrod on [a, b]; b may be +infinity.
template <class F>
double integrate(F&& f, double a, double b, double rel_tol = 1e-10) {
  double err = 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
      std::forward<F>(f), a, b, 15, rel_tol, &err);
}

/// Golden-section maximization on [lo, hi] to abscissa tolerance xtol.
/// Handles boundary maxima (the interval collapses onto the endpoint).
template <class F>
std::pair<double, double> golden_max(F&& f, double lo, double hi,
                                     double xtol = 1e-8) {
  constexpr double ratio = 0.6180339887498949;  // (sqrt(5)-1)/2
  double a = lo, b = hi;
  double x1 = b - ratio * (b - a);
  double x2 = a + ratio * (b - a);
  double f1 = f(x1);
  double f2 = f(x2);
  while (b - a > xtol) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + ratio * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - ratio * (b - a);
      f1 = f(x1);
    }
  }
  return f1 >= f2 ? std::make_pair(x1, f1) : std::make_pair(x2, f2);
}

/// Coarse grid scan (n points, optionally log-spaced) followed by
/// golden-section refinement around the best grid cell.
template <class F>
std::pair<double, double> grid_then_golden_max(F&& f, double lo, double hi,
                                               int n, bool log_spaced,
                                               double xtol = 1e-8) {
  double best_x = lo, best_f = -kInf;
  int best_i = 0;
  for (int i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / (n - 1);
    const double x = log_spaced ? lo * std::pow(hi / lo, t) : lo + t * (hi - lo);
    const double v = f(x);
    if (v > best_f) {
      best_f = v;
      best_x = x;
      best_i = i;
    }
  }
  const double tl = static_cast<double>(best_i > 0 ? best_i - 1 : 0) / (n - 1);
  const double tr = static_cast<double>(best_i < n - 1 ? best_i + 1 : n - 1) / (n - 1);
  const double wl = log_spaced ? lo * std::pow(hi / lo, tl) : lo + tl * (hi - lo);
  const double wr = log_spaced ? lo * std::pow(hi / lo, tr) : lo + tr * (hi - lo);
  auto [gx, gf] = golden_max(f, wl, wr, xtol);
  return gf >= best_f ? std::make_pair(gx, gf) : std::make_pair(best_x, best_f);
}

}  // namespace lundberg::num
