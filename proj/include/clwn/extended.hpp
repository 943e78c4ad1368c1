#pragma once

#include <cmath>
#include <complex>
#include <limits>

namespace clwn {

using Complex = std::complex<double>;

// A point of the extended real line R u {inf}, the boundary circle of H.
// Infinity is tagged explicitly rather than encoded as a huge float so that
// boundary triples through inf stay exact.
struct ExtReal {
  double value = 0.0;
  bool is_inf = false;

  static ExtReal inf() { return ExtReal{0.0, true}; }
  static ExtReal of(double x) { return ExtReal{x, false}; }

  bool finite() const { return !is_inf; }
};

inline bool operator==(const ExtReal& a, const ExtReal& b) {
  if (a.is_inf || b.is_inf) return a.is_inf == b.is_inf;
  return a.value == b.value;
}

// Chordal-style distance on the boundary used only for degeneracy checks:
// finite vs finite is the usual gap, anything vs inf uses 1/(1+|x|) scaling
// so that two points are "close" near infinity when both are huge.
inline double boundary_gap(const ExtReal& a, const ExtReal& b) {
  if (a.is_inf && b.is_inf) return 0.0;
  if (a.is_inf) return 1.0 / (1.0 + std::fabs(b.value));
  if (b.is_inf) return 1.0 / (1.0 + std::fabs(a.value));
  return std::fabs(a.value - b.value);
}

// Extended complex value: the image of a Moebius map may be the point at
// infinity when the denominator vanishes.
struct ExtComplex {
  Complex value{0.0, 0.0};
  bool is_inf = false;

  static ExtComplex inf() { return ExtComplex{{0.0, 0.0}, true}; }
  static ExtComplex of(Complex z) { return ExtComplex{z, false}; }
  static ExtComplex of(const ExtReal& x) {
    return x.is_inf ? inf() : of(Complex(x.value, 0.0));
  }

  bool finite() const { return !is_inf; }
};

inline bool nearly_equal(const ExtComplex& a, const ExtComplex& b, double tol) {
  if (a.is_inf || b.is_inf) return a.is_inf == b.is_inf;
  return std::abs(a.value - b.value) <= tol;
}

}  // namespace clwn
