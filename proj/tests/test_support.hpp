#pragma once

// Shared fixtures: the two-generator Schottky-type group used across the
// series, field and flow tests, plus a prescribed smooth perturbation of its
// generators for velocity-dependent checks.

#include <array>
#include <functional>

#include "clwn/automorphic.hpp"
#include "clwn/fuchsian.hpp"
#include "clwn/moebius.hpp"

namespace clwn_test {

// Hyperbolic generators with fixed-point pairs (-2,-1) and (1,2), both of
// multiplier 9.  Isometric circles are pairwise disjoint, so the ping-pong
// probe passes and the limit set stays inside [-2.5,-0.5] u [0.5,2.5].
inline clwn::FuchsianGroup schottky_group() {
  return clwn::FuchsianGroup::create(
      {clwn::MoebiusMap::from_fixed_points(-2.0, -1.0, 9.0),
       clwn::MoebiusMap::from_fixed_points(1.0, 2.0, 9.0)});
}

// Time-dependent version of the same group: fixed points and multipliers
// drift smoothly.  schottky_group_at(0) equals schottky_group().
inline clwn::FuchsianGroup schottky_group_at(double t) {
  return clwn::FuchsianGroup::create(
      {clwn::MoebiusMap::from_fixed_points(-2.0 + 0.05 * t, -1.0 - 0.03 * t,
                                           9.0 + 0.4 * t),
       clwn::MoebiusMap::from_fixed_points(1.0 - 0.02 * t, 2.0 + 0.04 * t,
                                           9.0 - 0.5 * t)});
}

// Velocity of the family above at t = 0, by central differences of the
// exactly normalized coefficients.
inline clwn::GroupVelocity schottky_velocity() {
  return clwn::GroupVelocity::from_family(schottky_group_at, 0.0, 1e-6);
}

inline clwn::FuchsianGroup cyclic_group(double attracting, double repelling,
                                        double multiplier) {
  return clwn::FuchsianGroup::create(
      {clwn::MoebiusMap::from_fixed_points(attracting, repelling, multiplier)});
}

inline const std::array<clwn::Complex, 5>& field_test_points() {
  static const std::array<clwn::Complex, 5> pts = {
      clwn::Complex(0.0, 1.0), clwn::Complex(0.0, 2.0),
      clwn::Complex(0.5, 1.0), clwn::Complex(-0.5, 1.0),
      clwn::Complex(0.0, 3.0)};
  return pts;
}

}  // namespace clwn_test
