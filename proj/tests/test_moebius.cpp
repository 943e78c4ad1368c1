#include "clwn/moebius.hpp"

#include <cmath>
#include <random>

#include "clwn/errors.hpp"
#include "doctest.h"

using namespace clwn;

namespace {

MoebiusMap random_map(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> coef(-10.0, 10.0);
  for (;;) {
    const double a = coef(rng), b = coef(rng), c = coef(rng), d = coef(rng);
    if (a * d - b * c > 0.1) return MoebiusMap(a, b, c, d);
  }
}

}  // namespace

TEST_CASE("compose basics") {
  const MoebiusMap shift = MoebiusMap::translation(1.0);
  const MoebiusMap unshift = MoebiusMap::translation(-1.0);
  CHECK(compose(shift, unshift).nearly_identity());

  const MoebiusMap twice = MoebiusMap::scaling(2.0);
  const MoebiusMap four = compose(twice, twice);
  CHECK(std::abs(four.apply({1.0, 0.0}) - Complex(4.0, 0.0)) < 1e-12);

  const MoebiusMap aff = compose(twice, shift);  // z -> 2z + 2
  CHECK(std::abs(aff.apply({3.0, 1.0}) - Complex(8.0, 2.0)) < 1e-12);
}

TEST_CASE("apply special points") {
  CHECK(std::abs(MoebiusMap::scaling(2.0).apply({0, 1}) - Complex(0, 2)) <
        1e-15);
  const MoebiusMap inv(0, -1, 1, 0);  // z -> -1/z
  CHECK(std::abs(inv.apply({0, 1}) - Complex(0, 1)) < 1e-15);
  const MoebiusMap f(1, 1, 1, 2);  // (z+1)/(z+2)
  CHECK(std::abs(f.apply({0, 0}) - Complex(0.5, 0.0)) < 1e-15);

  // Pole maps to the explicit infinity.
  CHECK(f.apply_ext(ExtComplex::of(Complex(-2.0, 0.0))).is_inf);
  CHECK(f.apply_boundary(ExtReal::inf()).value == doctest::Approx(1.0));
}

TEST_CASE("derivative matches central finite difference") {
  std::mt19937_64 rng(7);
  const double h = 1e-6;
  for (int trial = 0; trial < 50; ++trial) {
    const MoebiusMap f = random_map(rng);
    const Complex z(0.3 * trial - 4.0, 1.0 + 0.1 * trial);
    const Complex fd = (f.apply(z + h) - f.apply(z - h)) / (2.0 * h);
    CHECK(std::abs(f.derivative(z) - fd) < 1e-8);
  }
  CHECK(std::abs(MoebiusMap::scaling(2.0).derivative({0.7, 2.0}) -
                 Complex(2.0, 0.0)) < 1e-12);
  CHECK(std::abs(MoebiusMap().derivative({0.1, 1.0}) - Complex(1.0, 0.0)) <
        1e-15);
}

TEST_CASE("classification") {
  CHECK(classify(MoebiusMap::translation(1.0)) == MapClass::Parabolic);
  CHECK(classify(MoebiusMap::scaling(2.0)) == MapClass::Hyperbolic);
  CHECK(classify(MoebiusMap(0, -1, 1, 0)) == MapClass::Elliptic);
  CHECK(classify(MoebiusMap()) == MapClass::Identity);
}

TEST_CASE("classification is conjugation invariant") {
  std::mt19937_64 rng(11);
  const MoebiusMap samples[] = {MoebiusMap::translation(1.0),
                                MoebiusMap::scaling(3.0),
                                MoebiusMap(0, -1, 1, 0)};
  for (const auto& f : samples) {
    for (int trial = 0; trial < 20; ++trial) {
      const MoebiusMap h = random_map(rng);
      const MoebiusMap conj = compose(compose(h, f), h.inverse());
      CHECK(classify(conj, 1e-7) == classify(f));
    }
  }
}

TEST_CASE("fixed points") {
  auto fp = fixed_points(MoebiusMap::scaling(2.0));
  REQUIRE(fp.size() == 2);
  CHECK(fp[0].is_inf);
  CHECK(std::abs(fp[1].value) < 1e-15);

  fp = fixed_points(MoebiusMap::translation(1.0));
  REQUIRE(fp.size() == 1);
  CHECK(fp[0].is_inf);

  // (2z+1)/(z+1): golden-ratio fixed points via the quadratic oracle.
  fp = fixed_points(MoebiusMap(2, 1, 1, 1));
  REQUIRE(fp.size() == 2);
  const double r1 = (1.0 + std::sqrt(5.0)) / 2.0;
  const double r2 = (1.0 - std::sqrt(5.0)) / 2.0;
  const double lo = std::min(fp[0].value.real(), fp[1].value.real());
  const double hi = std::max(fp[0].value.real(), fp[1].value.real());
  CHECK(lo == doctest::Approx(r2).epsilon(1e-12));
  CHECK(hi == doctest::Approx(r1).epsilon(1e-12));
}

TEST_CASE("hyperbolic axis round trip") {
  const MoebiusMap f = MoebiusMap::from_fixed_points(-2.0, -1.0, 9.0);
  CHECK(classify(f) == MapClass::Hyperbolic);
  const auto axis = hyperbolic_axis(f);
  CHECK(axis.attracting.value == doctest::Approx(-2.0).epsilon(1e-10));
  CHECK(axis.repelling.value == doctest::Approx(-1.0).epsilon(1e-10));
  CHECK(axis.multiplier == doctest::Approx(9.0).epsilon(1e-10));
  // Fixed points actually fixed, orbit converges to the attractor.
  CHECK(std::abs(f.apply({-2.0, 0.0}) - Complex(-2.0, 0.0)) < 1e-12);
  Complex z{5.0, 0.3};
  for (int i = 0; i < 40; ++i) z = f.apply(z);
  CHECK(std::abs(z - Complex(-2.0, 0.0)) < 1e-8);
}

TEST_CASE("from_triples") {
  const std::array<ExtReal, 3> std_triple = {ExtReal::of(0), ExtReal::of(1),
                                             ExtReal::inf()};
  CHECK(from_triples(std_triple, std_triple).nearly_identity());

  const std::array<ExtReal, 3> shifted = {ExtReal::of(1), ExtReal::of(2),
                                          ExtReal::inf()};
  const MoebiusMap shift = from_triples(std_triple, shifted);
  CHECK(coefficient_distance(shift, MoebiusMap::translation(1.0)) < 1e-12);

  const std::array<ExtReal, 3> doubled = {ExtReal::of(0), ExtReal::of(2),
                                          ExtReal::inf()};
  const MoebiusMap dbl = from_triples(std_triple, doubled);
  CHECK(coefficient_distance(dbl, MoebiusMap::scaling(2.0)) < 1e-12);

  CHECK_THROWS_AS(from_triples(std_triple,
                               {ExtReal::of(1), ExtReal::of(1 + 1e-12),
                                ExtReal::inf()}),
                  DegenerateTriple);
  // Swapping two targets reverses the boundary orientation.
  CHECK_THROWS_AS(from_triples(std_triple,
                               {ExtReal::of(1), ExtReal::of(0), ExtReal::inf()}),
                  OrientationMismatch);
}

TEST_CASE("from_triples reproduces random triples") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> pt(-8.0, 8.0);
  int done = 0;
  while (done < 40) {
    std::array<ExtReal, 3> p, q;
    for (int i = 0; i < 3; ++i) p[i] = ExtReal::of(pt(rng));
    for (int i = 0; i < 3; ++i) q[i] = ExtReal::of(pt(rng));
    auto gap_ok = [](const std::array<ExtReal, 3>& t) {
      return boundary_gap(t[0], t[1]) > 1e-3 && boundary_gap(t[0], t[2]) > 1e-3 &&
             boundary_gap(t[1], t[2]) > 1e-3;
    };
    if (!gap_ok(p) || !gap_ok(q)) continue;
    MoebiusMap f;
    try {
      f = from_triples(p, q);
    } catch (const OrientationMismatch&) {
      std::swap(q[0], q[1]);
      f = from_triples(p, q);
    }
    for (int i = 0; i < 3; ++i) {
      const ExtReal image = f.apply_boundary(p[i]);
      REQUIRE(image.finite());
      CHECK(std::fabs(image.value - q[i].value) < 1e-10);
    }
    ++done;
  }
}

TEST_CASE("group laws on random maps") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 60; ++trial) {
    const MoebiusMap f = random_map(rng), g = random_map(rng),
                     h = random_map(rng);
    CHECK(coefficient_distance(compose(compose(f, g), h),
                               compose(f, compose(g, h))) < 1e-12);
    CHECK(compose(f, f.inverse()).nearly_identity(1e-12));
    // Normalization invariant.
    CHECK(std::fabs(f.a() * f.d() - f.b() * f.c() - 1.0) < 1e-12);
    CHECK(f.trace() >= 0.0);
  }
}

TEST_CASE("chain rule for derivatives") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 40; ++trial) {
    const MoebiusMap f = random_map(rng), g = random_map(rng);
    const Complex z(0.2 * trial - 4.0, 0.5 + 0.05 * trial);
    const Complex lhs = compose(f, g).derivative(z);
    const Complex rhs = f.derivative(g.apply(z)) * g.derivative(z);
    CHECK(std::abs(lhs - rhs) <= 1e-10 * std::abs(rhs));
  }
}
