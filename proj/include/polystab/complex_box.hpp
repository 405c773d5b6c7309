#pragma once

#include <algorithm>
#include <cmath>
#include <complex>

namespace polystab {

/// Axis-aligned rectangle in the complex plane: the enclosure currency of
/// the zero-exclusion engine. Operations are exact set images for the
/// inputs given (segments and Minkowski sums of segments), up to floating
/// rounding, which the caller absorbs in its exclusion margin.
struct ComplexBox {
  double re_lo = 0.0, re_hi = 0.0, im_lo = 0.0, im_hi = 0.0;

  static ComplexBox point(std::complex<double> z) {
    return {z.real(), z.real(), z.imag(), z.imag()};
  }

  bool contains_zero() const {
    return re_lo <= 0.0 && 0.0 <= re_hi && im_lo <= 0.0 && 0.0 <= im_hi;
  }

  bool contains(std::complex<double> z) const {
    return re_lo <= z.real() && z.real() <= re_hi && im_lo <= z.imag() &&
           z.imag() <= im_hi;
  }

  /// Euclidean distance from the origin to the rectangle (0 when inside).
  double distance_to_zero() const {
    double dx = std::max({re_lo, -re_hi, 0.0});
    double dy = std::max({im_lo, -im_hi, 0.0});
    return std::hypot(dx, dy);
  }

  ComplexBox& operator+=(const ComplexBox& o) {
    re_lo += o.re_lo;
    re_hi += o.re_hi;
    im_lo += o.im_lo;
    im_hi += o.im_hi;
    return *this;
  }

  ComplexBox inflated(double eps) const {
    return {re_lo - eps, re_hi + eps, im_lo - eps, im_hi + eps};
  }
};

/// Rectangle hull of the segment {c * t : t in [t_lo, t_hi]}, t_lo <= t_hi.
inline ComplexBox scale_interval(std::complex<double> c, double t_lo, double t_hi) {
  double ra = c.real() * t_lo, rb = c.real() * t_hi;
  double ia = c.imag() * t_lo, ib = c.imag() * t_hi;
  return {std::min(ra, rb), std::max(ra, rb), std::min(ia, ib), std::max(ia, ib)};
}

}  // namespace polystab
