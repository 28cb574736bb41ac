#pragma once

#include <cmath>

namespace nwig::detail {

// exp with a hard underflow cutoff: exponents below -700 (just above the
// double-precision underflow threshold of about -708) return exactly 0.
// Purity integrals square already-tiny Wigner values; flushing to a clean
// zero avoids denormal noise in those sums.
inline double exp_clamped(double exponent) {
  return exponent < -700.0 ? 0.0 : std::exp(exponent);
}

// Four-point (cubic) Lagrange interpolation.  y0..y3 are samples at local
// coordinates -1, 0, 1, 2; t in [0, 1] is the evaluation point between y1
// and y2.  Exact for cubics; O(h^4) error for smooth data.
template <typename T>
inline T cubic_interpolate(const T& y0, const T& y1, const T& y2, const T& y3, double t) {
  const double c0 = -t * (t - 1.0) * (t - 2.0) / 6.0;
  const double c1 = (t + 1.0) * (t - 1.0) * (t - 2.0) / 2.0;
  const double c2 = -(t + 1.0) * t * (t - 2.0) / 2.0;
  const double c3 = (t + 1.0) * t * (t - 1.0) / 6.0;
  return y0 * c0 + y1 * c1 + y2 * c2 + y3 * c3;
}

}  // namespace nwig::detail
