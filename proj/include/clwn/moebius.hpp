#pragma once

#include <array>
#include <vector>

#include "clwn/extended.hpp"

namespace clwn {

enum class MapClass { Identity, Elliptic, Parabolic, Hyperbolic };

// Real Moebius transformation z -> (az+b)/(cz+d) preserving the upper
// half-plane.  Stored normalized: ad - bc = 1, sign of (a,b,c,d) chosen so
// that a + d >= 0, ties broken by a >= 0, then b >= 0.  Normalization makes
// coefficient comparison of words canonical.
class MoebiusMap {
public:
  MoebiusMap() : a_(1), b_(0), c_(0), d_(1) {}  // identity

  // Throws DegenerateTriple-style ConfigError if ad - bc <= 0.
  MoebiusMap(double a, double b, double c, double d);

  static MoebiusMap identity() { return MoebiusMap(); }
  static MoebiusMap translation(double t) { return MoebiusMap(1, t, 0, 1); }
  static MoebiusMap scaling(double s);  // z -> s z, s > 0

  // Hyperbolic map with given attracting / repelling boundary fixed points
  // and multiplier mu > 1.
  static MoebiusMap from_fixed_points(double attracting, double repelling,
                                      double multiplier);

  double a() const { return a_; }
  double b() const { return b_; }
  double c() const { return c_; }
  double d() const { return d_; }
  double trace() const { return a_ + d_; }

  Complex apply(Complex z) const;
  ExtComplex apply_ext(const ExtComplex& z) const;
  ExtReal apply_boundary(const ExtReal& x) const;

  // Derivative d/dz; for the normalized representative this is 1/(cz+d)^2.
  Complex derivative(Complex z) const;
  // Second derivative, -2c/(cz+d)^3.
  Complex second_derivative(Complex z) const;

  MoebiusMap inverse() const;

  bool nearly_identity(double tol = 1e-12) const;

private:
  double a_, b_, c_, d_;
  void normalize();
};

// compose(f, g) acts as f after g: apply(compose(f,g), z) = f(g(z)).
MoebiusMap compose(const MoebiusMap& f, const MoebiusMap& g);

// Classification by |trace|: <2 elliptic, =2 (within tol) parabolic,
// >2 hyperbolic; identity detected first.  The tolerance absorbs numerical
// perturbation of coefficients during flows.
MapClass classify(const MoebiusMap& f, double parabolic_tol = 1e-9);

// Fixed points of a non-identity map: roots of c z^2 + (d-a) z - b = 0 in the
// extended plane.  Hyperbolic/parabolic maps yield boundary values.
std::vector<ExtComplex> fixed_points(const MoebiusMap& f);

// For hyperbolic f: (attracting, repelling) boundary fixed points.
struct HyperbolicAxis {
  ExtReal attracting;
  ExtReal repelling;
  double multiplier;  // > 1
};
HyperbolicAxis hyperbolic_axis(const MoebiusMap& f);

// Unique H-preserving map sending p_j -> q_j for two boundary triples with
// the same cyclic orientation.  Solved by mapping both triples to (0,1,inf)
// and composing; an ill-conditioned 3x3 solve is avoided on purpose.
// Throws DegenerateTriple / OrientationMismatch.
MoebiusMap from_triples(const std::array<ExtReal, 3>& p,
                        const std::array<ExtReal, 3>& q);

double coefficient_distance(const MoebiusMap& f, const MoebiusMap& g);

}  // namespace clwn
