#pragma once
//
// Catenary buckling of a single discrete ribbon.
//
// A ribbon of rest length L whose endpoints sit dy apart (dy < L) at equal
// height hangs as z(y) = a cosh(y/a) - (a + dz). The shape parameter a
// solves L = 2a sinh(dy / 2a); the sag satisfies dz^2 + 2a dz = (L/2)^2.
//
// The root is found in u = dy / (2a), where the length condition reads
// sinh(u)/u - 1 = (L - dy)/dy. That form keeps full relative precision
// when the ribbon is nearly straight (u -> 0, a -> infinity).
//

#include <cmath>
#include <limits>
#include <sstream>
#include <utility>
#include <vector>

#include "errors.hpp"

namespace kirigami {

struct RibbonCurve {
  static constexpr double kFlat = std::numeric_limits<double>::infinity();

  double station_frac = 0.5;  // xi in (0, 1) along the pull axis
  double rest_length = 0.0;   // mm
  double dy = 0.0;            // mm, endpoint separation
  double a = kFlat;           // mm; kFlat when the ribbon is unbuckled
  double dz = 0.0;            // mm, sag at the midpoint

  bool is_flat() const noexcept { return std::isinf(a); }
};

struct ProfilePoint {
  double y;
  double z;
};

namespace detail {

// sinh(u)/u - 1 and its derivative, series-evaluated below u = 1.
inline double sinhc_minus_one(double u) {
  if (u < 1.0) {
    const double u2 = u * u;
    double term = u2 / 6.0, sum = 0.0;
    for (int k = 1; k < 30 && term > sum * 1e-18; ++k) {
      sum += term;
      term *= u2 / ((2.0 * k + 2.0) * (2.0 * k + 3.0));
    }
    return sum;
  }
  return std::sinh(u) / u - 1.0;
}

inline double sinhc_minus_one_deriv(double u) {
  if (u < 1.0) {
    // d/du sum u^{2k}/(2k+1)! = sum 2k u^{2k-1}/(2k+1)!
    const double u2 = u * u;
    double coeff = 1.0 / 6.0;  // 1/(2k+1)! at k = 1
    double power = u;          // u^{2k-1}
    double sum = 0.0;
    for (int k = 1; k < 30; ++k) {
      const double term = 2.0 * k * coeff * power;
      sum += term;
      if (term <= sum * 1e-18) break;
      coeff /= (2.0 * k + 2.0) * (2.0 * k + 3.0);
      power *= u2;
    }
    return sum;
  }
  return (u * std::cosh(u) - std::sinh(u)) / (u * u);
}

// Solves sinh(u)/u - 1 = target for u > 0 (target > 0).
inline double solve_half_angle(double target) {
  double lo = 0.0, hi = 1.0;
  while (sinhc_minus_one(hi) < target) {
    lo = hi;
    hi *= 2.0;
    if (hi > 700.0) return 700.0;  // dy/L below ~1e-300
  }
  // Bisection to 1e-6 relative.
  while (hi - lo > 1e-6 * hi) {
    const double mid = 0.5 * (lo + hi);
    (sinhc_minus_one(mid) < target ? lo : hi) = mid;
  }
  // Newton polish; the function is convex and increasing so iterates stay
  // in the bracket from the right, bisect otherwise.
  double u = hi;
  for (int it = 0; it < 50; ++it) {
    const double f = sinhc_minus_one(u) - target;
    if (f == 0.0) break;
    (f < 0.0 ? lo : hi) = u;
    double next = u - f / sinhc_minus_one_deriv(u);
    if (!(next >= lo && next <= hi)) next = 0.5 * (lo + hi);
    const double step = std::abs(next - u);
    u = next;
    if (step <= 1e-12 * u) break;
  }
  return u;
}

}  // namespace detail

/// Sag from the quadratic depth relation, dz = -a + sqrt(a^2 + (L/2)^2),
/// written in the cancellation-free form.
inline double sag_from_length(double a, double rest_length) {
  const double half = rest_length / 2.0;
  if (std::isinf(a)) return 0.0;
  return half * half / (a + std::hypot(a, half));
}

/// Sag read off the curve itself, a (cosh(dy/2a) - 1) = 2a sinh^2(dy/4a).
inline double sag_from_shape(double a, double dy) {
  if (std::isinf(a)) return 0.0;
  const double s = std::sinh(dy / (4.0 * a));
  return 2.0 * a * s * s;
}

/// Shape parameter and sag for a ribbon of rest length L with endpoints dy apart.
inline RibbonCurve solve_catenary(double rest_length, double dy) {
  if (!(std::isfinite(rest_length) && rest_length > 0.0) || !(std::isfinite(dy) && dy >= 0.0)) {
    std::ostringstream msg;
    msg << "rest_length = " << rest_length << ", dy = " << dy;
    throw Error(ErrorKind::InvalidRibbon, msg.str());
  }
  RibbonCurve c;
  c.rest_length = rest_length;
  c.dy = dy;
  if (dy >= rest_length) return c;  // flat
  if (dy == 0.0) {
    c.a = 0.0;
    c.dz = rest_length / 2.0;
    return c;
  }
  const double u = detail::solve_half_angle((rest_length - dy) / dy);
  c.a = dy / (2.0 * u);
  c.dz = sag_from_length(c.a, rest_length);
  return c;
}

/// n_samples points z(y) at uniform y in [-dy/2, dy/2]. Odd counts include
/// the apex y = 0.
inline std::vector<ProfilePoint> ribbon_profile(const RibbonCurve& curve, int n_samples) {
  if (curve.is_flat()) throw Error(ErrorKind::FlatRibbon, "flat ribbon has no catenary profile");
  if (n_samples < 3) throw Error(ErrorKind::InvalidRibbon, "ribbon_profile needs at least 3 samples");

  std::vector<ProfilePoint> pts;
  pts.reserve(static_cast<std::size_t>(n_samples));
  const double last = n_samples - 1;
  if (curve.a == 0.0) {
    // Fully folded: both halves hang straight down to the apex.
    for (int i = 0; i < n_samples; ++i) {
      const double t = i / last;
      pts.push_back({0.0, -curve.dz * (1.0 - std::abs(2.0 * t - 1.0))});
    }
    return pts;
  }
  for (int i = 0; i < n_samples; ++i) {
    const double y = curve.dy * (i / last - 0.5);
    const double s = std::sinh(y / (2.0 * curve.a));
    pts.push_back({y, 2.0 * curve.a * s * s - curve.dz});
  }
  return pts;
}

}  // namespace kirigami
