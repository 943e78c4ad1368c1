#include "clwn/fuchsian.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "clwn/errors.hpp"
#include "doctest.h"
#include "test_support.hpp"

using namespace clwn;
using clwn_test::schottky_group;

TEST_CASE("ball counts match the closed form") {
  const FuchsianGroup g = schottky_group();
  CHECK(g.ball(0).size() == 1);
  CHECK(g.ball(1).size() == 5);
  CHECK(g.ball(2).size() == 17);
  CHECK(FuchsianGroup::ball_size(2, 6) == 1457);
  CHECK(g.ball(6).size() == 1457);
  CHECK(g.ball(0)[0].word.empty());
}

TEST_CASE("ball order is deterministic and length-lexicographic") {
  const FuchsianGroup g = schottky_group();
  const auto& b = g.ball(3);
  for (std::size_t i = 1; i < b.size(); ++i) {
    CHECK(b[i - 1].word.length() <= b[i].word.length());
    CHECK(is_reduced(b[i].word));
  }
  // No duplicates.
  std::set<std::string> seen;
  for (const auto& e : b) CHECK(seen.insert(e.word.str()).second);
  // First shell order: +1, -1, +2, -2.
  CHECK(b[1].word.str() == "1");
  CHECK(b[2].word.str() == "-1");
  CHECK(b[3].word.str() == "2");
  CHECK(b[4].word.str() == "-2");
}

TEST_CASE("capacity cap") {
  const FuchsianGroup g = schottky_group();
  CHECK_THROWS_AS(g.ball(12), CapacityExceeded);
}

TEST_CASE("word evaluation is a homomorphism") {
  const FuchsianGroup g = schottky_group();
  const auto& b = g.ball(4);
  // Sample pairs with |w1| + |w2| <= 8.
  for (std::size_t i = 0; i < b.size(); i += 37) {
    for (std::size_t j = 0; j < b.size(); j += 41) {
      const Word w = concat_reduced(b[i].word, b[j].word);
      const MoebiusMap direct = g.evaluate(w);
      const MoebiusMap composed = compose(b[i].map, b[j].map);
      CHECK(coefficient_distance(direct, composed) < 1e-10);
    }
  }
}

TEST_CASE("validation rejects bad generator sets") {
  CHECK_THROWS_AS(FuchsianGroup::create({MoebiusMap::translation(1.0)}),
                  ConfigError);
  const MoebiusMap h = MoebiusMap::from_fixed_points(-2, -1, 9);
  CHECK_THROWS_AS(FuchsianGroup::create({h, h.inverse()}), ConfigError);
  CHECK_THROWS_AS(FuchsianGroup::create({h, h}), ConfigError);
}

TEST_CASE("ping pong probe") {
  CHECK(schottky_group().ping_pong_ok());
  // Overlapping isometric circles: fixed points too close together.
  const FuchsianGroup crowded = FuchsianGroup::create(
      {MoebiusMap::from_fixed_points(-1.0, 1.0, 2.0),
       MoebiusMap::from_fixed_points(-0.9, 0.9, 2.0)});
  CHECK_FALSE(crowded.ping_pong_ok());
}

TEST_CASE("limit set of a cyclic group") {
  const FuchsianGroup g = clwn_test::cyclic_group(1.0, -1.0, 4.0);
  for (int L : {1, 3, 5}) {
    const auto sample = g.limit_set_sample(L);
    REQUIRE(sample.size() == 2);
    CHECK(sample[0] == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(sample[1] == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("limit set sample refinement stays inside the level-1 intervals") {
  const FuchsianGroup g = schottky_group();
  const auto level1 = g.limit_set_sample(1);
  REQUIRE(level1.size() >= 4);
  const double spread = 0.75;  // isometric circle radius 3/8, doubled
  const auto contained = [&](double x) {
    for (double c : level1) {
      if (std::fabs(x - c) <= spread) return true;
    }
    return false;
  };
  for (double x : g.limit_set_sample(6)) CHECK(contained(x));
  // Cross-check: the L=6 sample lies inside the hull of the L=8 sample.
  const auto l8 = g.limit_set_sample(8);
  for (double x : g.limit_set_sample(6)) {
    const auto it = std::lower_bound(l8.begin(), l8.end(), x - 1e-9);
    CHECK(it != l8.end());
    CHECK(std::fabs(*it - x) < 1e-9);
  }
}

TEST_CASE("second kind probe") {
  const FuchsianGroup cyc = clwn_test::cyclic_group(1.0, -1.0, 4.0);
  const auto mid = cyc.is_second_kind_at(0.0, 3);
  CHECK(mid.second_kind);
  CHECK(mid.margin == doctest::Approx(1.0));
  const auto at_fixed = cyc.is_second_kind_at(1.0, 3);
  CHECK_FALSE(at_fixed.second_kind);
  CHECK(at_fixed.margin < 1e-12);

  const auto gap = schottky_group().is_second_kind_at(0.0, 6);
  CHECK(gap.second_kind);
  CHECK(gap.margin > 0.05);
}

TEST_CASE("poincare partial sums") {
  const FuchsianGroup trivial = FuchsianGroup::create({});
  const auto base = trivial.poincare_partial({0.0, 1.0}, 0);
  CHECK(base.sum == doctest::Approx(1.0));
  CHECK(base.shell_value == doctest::Approx(1.0));

  const FuchsianGroup cyc = clwn_test::cyclic_group(1.0, -1.0, 4.0);
  double prev_sum = 0.0, prev_shell = 0.0;
  for (int L = 1; L <= 12; ++L) {
    const auto p = cyc.poincare_partial({0.0, 1.0}, L);
    CHECK(p.sum > prev_sum);
    if (L >= 2) CHECK(p.shell_value < prev_shell);
    prev_sum = p.sum;
    prev_shell = p.shell_value;
  }

  const FuchsianGroup g = schottky_group();
  prev_shell = 0.0;
  std::vector<double> sums(9), shells(9);
  for (int L = 2; L <= 8; ++L) {
    const auto p = g.poincare_partial({0.0, 1.0}, L);
    sums[L] = p.sum;
    shells[L] = p.shell_value;
    if (L > 2) CHECK(shells[L] < shells[L - 1]);
  }
  // Convergence against the shell heuristic.
  for (int L = 4; L <= 6; ++L) {
    CHECK(std::fabs(sums[L] - sums[L + 2]) < shells[L]);
  }

  CHECK_THROWS_AS(g.poincare_partial({1.0, 1e-9}, 4), NearLimitSet);
}

TEST_CASE("word helpers") {
  const Word w{{1, -2, 1}};
  CHECK(is_reduced(w));
  CHECK(inverse_word(w).str() == "-1 2 -1");
  CHECK(concat_reduced(w, inverse_word(w)).empty());
  CHECK_FALSE(is_reduced(Word{{1, -1}}));
  CHECK(Word::identity().str() == "e");
}
