#include "clwn/fuchsian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "clwn/errors.hpp"

namespace clwn {

std::string Word::str() const {
  std::string s;
  for (std::size_t i = 0; i < letters.size(); ++i) {
    if (i) s += ' ';
    s += std::to_string(letters[i]);
  }
  return s.empty() ? "e" : s;
}

bool is_reduced(const Word& w) {
  for (std::size_t i = 1; i < w.letters.size(); ++i) {
    if (w.letters[i] == -w.letters[i - 1]) return false;
  }
  return true;
}

Word concat_reduced(const Word& a, const Word& b) {
  Word out = a;
  for (int letter : b.letters) {
    if (!out.letters.empty() && out.letters.back() == -letter) {
      out.letters.pop_back();
    } else {
      out.letters.push_back(letter);
    }
  }
  return out;
}

Word inverse_word(const Word& w) {
  Word out;
  out.letters.reserve(w.letters.size());
  for (auto it = w.letters.rbegin(); it != w.letters.rend(); ++it) {
    out.letters.push_back(-*it);
  }
  return out;
}

struct FuchsianGroup::Cache {
  std::mutex mu;
  std::map<int, std::vector<BallEntry>> balls;
  std::map<int, std::vector<double>> limit_samples;
};

namespace {

// Isometric circle of f (c != 0): center -d/c, radius 1/|c|.
struct Circle {
  double center;
  double radius;
};

bool circles_disjoint(const Circle& a, const Circle& b) {
  return std::fabs(a.center - b.center) > a.radius + b.radius;
}

}  // namespace

FuchsianGroup::FuchsianGroup(std::vector<MoebiusMap> generators, bool validate)
    : generators_(std::move(generators)), cache_(std::make_shared<Cache>()) {
  const int m = static_cast<int>(generators_.size());
  if (validate) {
    for (int i = 0; i < m; ++i) {
      if (classify(generators_[i]) != MapClass::Hyperbolic) {
        throw ConfigError("generator " + std::to_string(i + 1) +
                          " is not hyperbolic");
      }
      for (int j = i + 1; j < m; ++j) {
        if (coefficient_distance(generators_[i], generators_[j]) < 1e-12 ||
            coefficient_distance(generators_[i], generators_[j].inverse()) <
                1e-12) {
          throw ConfigError("generators must be pairwise distinct and not "
                            "inverses of each other");
        }
      }
    }
    // Ping-pong style probe: the isometric circles of all generators and
    // their inverses should be pairwise disjoint.  Failure is only recorded;
    // freeness stays an assumption.
    std::vector<Circle> circles;
    bool all_have_circles = true;
    for (const auto& g : generators_) {
      for (const auto& f : {g, g.inverse()}) {
        if (f.c() == 0.0) {
          all_have_circles = false;
          break;
        }
        circles.push_back(Circle{-f.d() / f.c(), 1.0 / std::fabs(f.c())});
      }
    }
    if (all_have_circles) {
      for (std::size_t i = 0; i < circles.size() && ping_pong_ok_; ++i) {
        for (std::size_t j = i + 1; j < circles.size(); ++j) {
          if (!circles_disjoint(circles[i], circles[j])) {
            ping_pong_ok_ = false;
            break;
          }
        }
      }
    } else {
      ping_pong_ok_ = false;  // a generator fixes infinity; probe inconclusive
    }
  }
  if (m > 0) {
    const int cert_depth = m == 1 ? 4 : 3;
    kind_certificate_ = limit_set_sample(cert_depth);
  }
}

FuchsianGroup FuchsianGroup::create(std::vector<MoebiusMap> generators) {
  return FuchsianGroup(std::move(generators), true);
}

FuchsianGroup FuchsianGroup::unchecked(std::vector<MoebiusMap> generators) {
  return FuchsianGroup(std::move(generators), false);
}

const MoebiusMap& FuchsianGroup::generator(int index_1based) const {
  return generators_.at(static_cast<std::size_t>(index_1based - 1));
}

MoebiusMap letter_map(const FuchsianGroup& g, int letter) {
  const MoebiusMap& gen = g.generator(std::abs(letter));
  return letter > 0 ? gen : gen.inverse();
}

MoebiusMap FuchsianGroup::evaluate(const Word& w) const {
  MoebiusMap m;
  for (int letter : w.letters) m = compose(m, letter_map(*this, letter));
  return m;
}

std::uint64_t FuchsianGroup::ball_size(int generator_count,
                                       int max_word_length) {
  const std::uint64_t m = static_cast<std::uint64_t>(generator_count);
  if (m == 0 || max_word_length <= 0) return 1;
  std::uint64_t total = 1;
  std::uint64_t shell = 2 * m;
  for (int k = 1; k <= max_word_length; ++k) {
    total += shell;
    shell *= (2 * m - 1);
  }
  return total;
}

const std::vector<BallEntry>& FuchsianGroup::ball(int max_word_length) const {
  if (max_word_length < 0) throw ConfigError("word length must be >= 0");
  std::lock_guard<std::mutex> lock(cache_->mu);
  auto it = cache_->balls.find(max_word_length);
  if (it != cache_->balls.end()) return it->second;

  const int m = generator_count();
  const std::uint64_t count = ball_size(m, max_word_length);
  EnumerationPolicy defaults;
  if (count > defaults.max_words) {
    throw CapacityExceeded("ball of radius " + std::to_string(max_word_length) +
                           " has " + std::to_string(count) +
                           " words, exceeding the cap of " +
                           std::to_string(defaults.max_words));
  }

  std::vector<BallEntry> entries;
  entries.reserve(static_cast<std::size_t>(count));
  entries.push_back(BallEntry{Word::identity(), MoebiusMap::identity()});

  // Letter order for lexicographic enumeration: +1 < -1 < +2 < -2 < ...
  std::vector<int> alphabet;
  for (int i = 1; i <= m; ++i) {
    alphabet.push_back(i);
    alphabet.push_back(-i);
  }

  std::size_t shell_begin = 0, shell_end = 1;
  for (int len = 1; len <= max_word_length; ++len) {
    for (std::size_t idx = shell_begin; idx < shell_end; ++idx) {
      const BallEntry parent = entries[idx];  // copy: entries may reallocate
      for (int letter : alphabet) {
        if (!parent.word.letters.empty() &&
            parent.word.letters.back() == -letter) {
          continue;
        }
        BallEntry child;
        child.word = parent.word;
        child.word.letters.push_back(letter);
        child.map = compose(parent.map, letter_map(*this, letter));
        entries.push_back(std::move(child));
      }
    }
    shell_begin = shell_end;
    shell_end = entries.size();
  }

  auto [pos, inserted] =
      cache_->balls.emplace(max_word_length, std::move(entries));
  return pos->second;
}

std::vector<double> FuchsianGroup::limit_set_sample(int max_word_length) const {
  {
    std::lock_guard<std::mutex> lock(cache_->mu);
    auto it = cache_->limit_samples.find(max_word_length);
    if (it != cache_->limit_samples.end()) return it->second;
  }
  std::vector<double> pts;
  const auto& entries = ball(max_word_length);
  for (const auto& e : entries) {
    if (e.word.empty()) continue;
    for (const auto& fp : fixed_points(e.map)) {
      if (!fp.is_inf && std::fabs(fp.value.imag()) < 1e-9) {
        pts.push_back(fp.value.real());
      }
    }
  }
  std::sort(pts.begin(), pts.end());
  std::vector<double> dedup;
  for (double x : pts) {
    if (dedup.empty() || x - dedup.back() > 1e-12) dedup.push_back(x);
  }
  std::lock_guard<std::mutex> lock(cache_->mu);
  auto [pos, inserted] = cache_->limit_samples.emplace(max_word_length, dedup);
  return pos->second;
}

SecondKindProbe FuchsianGroup::is_second_kind_at(double x,
                                                 int max_word_length) const {
  return is_second_kind_at(Complex(x, 0.0), max_word_length);
}

SecondKindProbe FuchsianGroup::is_second_kind_at(Complex z,
                                                 int max_word_length) const {
  const auto samples =
      max_word_length >= 1 ? limit_set_sample(max_word_length) : kind_certificate_;
  double margin = std::numeric_limits<double>::infinity();
  for (double s : samples) {
    margin = std::min(margin, std::abs(z - Complex(s, 0.0)));
  }
  if (samples.empty()) margin = std::numeric_limits<double>::infinity();
  return SecondKindProbe{margin > limit_proximity_tol_, margin};
}

FuchsianGroup::PoincarePartial FuchsianGroup::poincare_partial(
    Complex z, int max_word_length) const {
  const auto probe = is_second_kind_at(z, std::max(1, std::min(max_word_length, 4)));
  if (generator_count() > 0 && !probe.second_kind) {
    throw NearLimitSet("evaluation point within " +
                       std::to_string(limit_proximity_tol_) +
                       " of the sampled limit set");
  }
  PoincarePartial out;
  std::size_t target_len = static_cast<std::size_t>(max_word_length);
  for (const auto& e : ball(max_word_length)) {
    const double v = std::abs(e.map.derivative(z));
    out.sum += v;
    if (e.word.length() == target_len) out.shell_value += v;
  }
  if (max_word_length == 0) out.shell_value = out.sum;
  return out;
}

}  // namespace clwn
