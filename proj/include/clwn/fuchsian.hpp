#pragma once

#include <cstdint>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "clwn/moebius.hpp"

namespace clwn {

// Reduced word in the free generators: letters are signed 1-based generator
// indices, +i for g_i and -i for g_i^-1, with no adjacent cancellation.
struct Word {
  std::vector<int> letters;

  static Word identity() { return Word{}; }
  static Word generator(int index_1based) { return Word{{index_1based}}; }
  bool empty() const { return letters.empty(); }
  std::size_t length() const { return letters.size(); }
  std::string str() const;
};

Word concat_reduced(const Word& a, const Word& b);
Word inverse_word(const Word& w);
bool is_reduced(const Word& w);

struct EnumerationPolicy {
  int max_word_length = 6;       // L
  double tail_tolerance = 1e-7;  // surfaced with every truncated series
  std::size_t max_words = 200000;
};

struct BallEntry {
  Word word;
  MoebiusMap map;
};

struct SecondKindProbe {
  bool second_kind = false;
  double margin = 0.0;  // distance from the query point to the sampled limit set
};

// Finitely-generated free Fuchsian group given by hyperbolic generators.
// Freeness is assumed, not verified: a ping-pong style check on isometric
// circles runs at construction and only flags, since the flows must keep
// going on slightly perturbed groups.
class FuchsianGroup {
public:
  // Validating constructor: every generator hyperbolic, pairwise distinct,
  // none the inverse of another.
  static FuchsianGroup create(std::vector<MoebiusMap> generators);

  // Skips the hyperbolicity validation; used by diagnostics and tests that
  // exercise the character identities on parabolic/elliptic elements.
  static FuchsianGroup unchecked(std::vector<MoebiusMap> generators);

  int generator_count() const { return static_cast<int>(generators_.size()); }
  const MoebiusMap& generator(int index_1based) const;
  const std::vector<MoebiusMap>& generators() const { return generators_; }
  bool ping_pong_ok() const { return ping_pong_ok_; }

  MoebiusMap evaluate(const Word& w) const;

  // All reduced words of length <= L, identity first, then ordered by
  // (length, lexicographic letter order g1 < g1^-1 < g2 < ...).  The order is
  // bit-stable across runs.  Results are memoized per L.
  const std::vector<BallEntry>& ball(int max_word_length) const;

  // Closed-form count 1 + sum_{k=1..L} 2m (2m-1)^(k-1).
  static std::uint64_t ball_size(int generator_count, int max_word_length);

  // Finite fixed points of all non-identity words in the ball, sorted and
  // deduplicated within 1e-12.
  std::vector<double> limit_set_sample(int max_word_length) const;

  // Margin of x against the sampled limit set; second_kind is true when the
  // margin clears the proximity tolerance.
  SecondKindProbe is_second_kind_at(double x, int max_word_length) const;
  SecondKindProbe is_second_kind_at(Complex z, int max_word_length) const;

  // Partial Poincare series sum_{|w|<=L} |w'(z)| together with the outermost
  // shell's contribution, the tail heuristic.  Throws NearLimitSet when z is
  // within proximity tolerance of the sampled limit set.
  struct PoincarePartial {
    double sum = 0.0;
    double shell_value = 0.0;
  };
  PoincarePartial poincare_partial(Complex z, int max_word_length) const;

  double limit_proximity_tol() const { return limit_proximity_tol_; }

private:
  FuchsianGroup(std::vector<MoebiusMap> generators, bool validate);

  std::vector<MoebiusMap> generators_;
  bool ping_pong_ok_ = true;
  double limit_proximity_tol_ = 1e-6;
  std::vector<double> kind_certificate_;  // limit-set sample at a fixed depth

  struct Cache;
  std::shared_ptr<Cache> cache_;
};

// Letter map lookup shared by enumeration and the velocity machinery.
MoebiusMap letter_map(const FuchsianGroup& g, int letter);

}  // namespace clwn
