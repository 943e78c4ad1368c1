#include "clwn/moebius.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "clwn/errors.hpp"

namespace clwn {

namespace {
constexpr double kDegenerateTol = 1e-10;
}

MoebiusMap::MoebiusMap(double a, double b, double c, double d)
    : a_(a), b_(b), c_(c), d_(d) {
  const double det = a_ * d_ - b_ * c_;
  if (!(det > 0.0) || !std::isfinite(det)) {
    throw OrientationMismatch("Moebius coefficients must have ad - bc > 0");
  }
  normalize();
}

void MoebiusMap::normalize() {
  const double det = a_ * d_ - b_ * c_;
  const double s = std::sqrt(det);
  a_ /= s;
  b_ /= s;
  c_ /= s;
  d_ /= s;
  const double tr = a_ + d_;
  bool flip = false;
  if (tr < 0.0) {
    flip = true;
  } else if (tr == 0.0) {
    if (a_ < 0.0) {
      flip = true;
    } else if (a_ == 0.0 && b_ < 0.0) {
      flip = true;
    }
  }
  if (flip) {
    a_ = -a_;
    b_ = -b_;
    c_ = -c_;
    d_ = -d_;
  }
}

MoebiusMap MoebiusMap::scaling(double s) {
  if (!(s > 0.0)) throw OrientationMismatch("scaling factor must be positive");
  return MoebiusMap(s, 0, 0, 1);
}

MoebiusMap MoebiusMap::from_fixed_points(double attracting, double repelling,
                                         double multiplier) {
  if (!(multiplier > 1.0)) {
    throw ConfigError("hyperbolic multiplier must exceed 1");
  }
  if (std::fabs(attracting - repelling) < kDegenerateTol) {
    throw DegenerateTriple("fixed points coincide");
  }
  // Conjugate z -> mu z by T(z) = (z - r)/(z - a), which sends r -> 0 and the
  // attracting point to infinity.
  const double r = repelling, a = attracting;
  const double s = std::sqrt(multiplier);
  // T = [[1,-r],[1,-a]], T^-1 = adj(T)/(r - a); scale factored out by
  // normalization.
  const double m00 = -a * s + r / s;
  const double m01 = a * r * s - a * r / s;
  const double m10 = -s + 1.0 / s;
  const double m11 = r * s - a / s;
  const double inv = 1.0 / (r - a);
  return MoebiusMap(m00 * inv, m01 * inv, m10 * inv, m11 * inv);
}

Complex MoebiusMap::apply(Complex z) const {
  const Complex den = c_ * z + d_;
  return (a_ * z + b_) / den;
}

ExtComplex MoebiusMap::apply_ext(const ExtComplex& z) const {
  if (z.is_inf) {
    if (c_ == 0.0) return ExtComplex::inf();
    return ExtComplex::of(Complex(a_ / c_, 0.0));
  }
  const Complex den = c_ * z.value + d_;
  if (std::abs(den) == 0.0) return ExtComplex::inf();
  return ExtComplex::of((a_ * z.value + b_) / den);
}

ExtReal MoebiusMap::apply_boundary(const ExtReal& x) const {
  if (x.is_inf) {
    if (c_ == 0.0) return ExtReal::inf();
    return ExtReal::of(a_ / c_);
  }
  const double den = c_ * x.value + d_;
  if (den == 0.0) return ExtReal::inf();
  return ExtReal::of((a_ * x.value + b_) / den);
}

Complex MoebiusMap::derivative(Complex z) const {
  const Complex den = c_ * z + d_;
  return 1.0 / (den * den);
}

Complex MoebiusMap::second_derivative(Complex z) const {
  const Complex den = c_ * z + d_;
  return -2.0 * c_ / (den * den * den);
}

MoebiusMap MoebiusMap::inverse() const {
  MoebiusMap g;
  g.a_ = d_;
  g.b_ = -b_;
  g.c_ = -c_;
  g.d_ = a_;
  g.normalize();
  return g;
}

bool MoebiusMap::nearly_identity(double tol) const {
  return std::fabs(a_ - 1.0) <= tol && std::fabs(b_) <= tol &&
         std::fabs(c_) <= tol && std::fabs(d_ - 1.0) <= tol;
}

MoebiusMap compose(const MoebiusMap& f, const MoebiusMap& g) {
  return MoebiusMap(f.a() * g.a() + f.b() * g.c(),
                    f.a() * g.b() + f.b() * g.d(),
                    f.c() * g.a() + f.d() * g.c(),
                    f.c() * g.b() + f.d() * g.d());
}

MapClass classify(const MoebiusMap& f, double parabolic_tol) {
  if (f.nearly_identity()) return MapClass::Identity;
  const double t = std::fabs(f.trace());
  if (std::fabs(t - 2.0) <= parabolic_tol) return MapClass::Parabolic;
  return t < 2.0 ? MapClass::Elliptic : MapClass::Hyperbolic;
}

std::vector<ExtComplex> fixed_points(const MoebiusMap& f) {
  // Roots of c z^2 + (d - a) z - b = 0.
  const double c = f.c(), q = f.d() - f.a(), b = f.b();
  std::vector<ExtComplex> out;
  if (c == 0.0) {
    out.push_back(ExtComplex::inf());
    if (q != 0.0) out.push_back(ExtComplex::of(Complex(b / q, 0.0)));
    return out;
  }
  const double disc = q * q + 4.0 * c * b;
  if (disc >= 0.0) {
    const double s = std::sqrt(disc);
    // Stable quadratic roots.
    const double r1 = (-q - std::copysign(s, q)) / (2.0 * c);
    const double r2 = (s == 0.0) ? r1 : (b / (c * r1));
    out.push_back(ExtComplex::of(Complex(r1, 0.0)));
    if (s != 0.0) out.push_back(ExtComplex::of(Complex(r2, 0.0)));
  } else {
    const double re = -q / (2.0 * c);
    const double im = std::sqrt(-disc) / (2.0 * c);
    out.push_back(ExtComplex::of(Complex(re, std::fabs(im))));
    out.push_back(ExtComplex::of(Complex(re, -std::fabs(im))));
  }
  return out;
}

HyperbolicAxis hyperbolic_axis(const MoebiusMap& f) {
  if (classify(f) != MapClass::Hyperbolic) {
    throw ConfigError("hyperbolic_axis requires a hyperbolic map");
  }
  auto pts = fixed_points(f);
  // Multiplier of the conjugated scaling: lambda = ((tr/2) + sqrt((tr/2)^2-1))^2.
  const double h = std::fabs(f.trace()) / 2.0;
  const double root = h + std::sqrt(h * h - 1.0);
  const double mult = root * root;
  // The attracting fixed point p satisfies |f'(p)| < 1.
  auto deriv_mag = [&f](const ExtComplex& p) {
    if (p.is_inf) {
      // f'(inf) corresponds to 1/a^2 for c == 0 maps.
      return f.c() == 0.0 ? 1.0 / (f.a() * f.a())
                          : std::numeric_limits<double>::infinity();
    }
    return std::abs(f.derivative(p.value));
  };
  ExtComplex p0 = pts[0];
  ExtComplex p1 = pts.size() > 1 ? pts[1] : pts[0];
  if (deriv_mag(p0) > deriv_mag(p1)) std::swap(p0, p1);
  auto to_ext_real = [](const ExtComplex& p) {
    return p.is_inf ? ExtReal::inf() : ExtReal::of(p.value.real());
  };
  return HyperbolicAxis{to_ext_real(p0), to_ext_real(p1), mult};
}

namespace {

// Matrix of the map sending (p1, p2, p3) to (0, 1, inf), with entries only
// needing the finite triple members.
struct RawMat {
  double m00, m01, m10, m11;
};

RawMat triple_to_standard(const std::array<ExtReal, 3>& p) {
  const ExtReal &p1 = p[0], &p2 = p[1], &p3 = p[2];
  if (p1.is_inf) {
    // z -> (p2 - p3)/(z - p3)
    return RawMat{0.0, p2.value - p3.value, 1.0, -p3.value};
  }
  if (p2.is_inf) {
    // z -> (z - p1)/(z - p3)
    return RawMat{1.0, -p1.value, 1.0, -p3.value};
  }
  if (p3.is_inf) {
    // z -> (z - p1)/(p2 - p1)
    return RawMat{1.0, -p1.value, 0.0, p2.value - p1.value};
  }
  return RawMat{p2.value - p3.value, -p1.value * (p2.value - p3.value),
                p2.value - p1.value, -p3.value * (p2.value - p1.value)};
}

}  // namespace

MoebiusMap from_triples(const std::array<ExtReal, 3>& p,
                        const std::array<ExtReal, 3>& q) {
  for (const auto* t : {&p, &q}) {
    for (int i = 0; i < 3; ++i) {
      for (int j = i + 1; j < 3; ++j) {
        if (boundary_gap((*t)[i], (*t)[j]) < kDegenerateTol) {
          throw DegenerateTriple("triple entries coincide within tolerance");
        }
      }
    }
  }
  const RawMat sp = triple_to_standard(p);
  const RawMat sq = triple_to_standard(q);
  // phi = Sq^-1 * Sp; use the adjugate, the scale drops out in normalization.
  const double i00 = sq.m11, i01 = -sq.m01, i10 = -sq.m10, i11 = sq.m00;
  const double a = i00 * sp.m00 + i01 * sp.m10;
  const double b = i00 * sp.m01 + i01 * sp.m11;
  const double c = i10 * sp.m00 + i11 * sp.m10;
  const double d = i10 * sp.m01 + i11 * sp.m11;
  const double det = a * d - b * c;
  if (!(std::fabs(det) > 0.0) || !std::isfinite(det)) {
    throw DegenerateTriple("triple map is singular");
  }
  if (det < 0.0) {
    throw OrientationMismatch("triples have opposite boundary orientation");
  }
  return MoebiusMap(a, b, c, d);
}

double coefficient_distance(const MoebiusMap& f, const MoebiusMap& g) {
  return std::max({std::fabs(f.a() - g.a()), std::fabs(f.b() - g.b()),
                   std::fabs(f.c() - g.c()), std::fabs(f.d() - g.d())});
}

}  // namespace clwn
