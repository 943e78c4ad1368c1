#pragma once

#include <vector>

namespace clwn {

// Monotone cubic Hermite interpolation (Fritsch-Carlson slopes).  Monotone
// data yields a monotone interpolant; evaluation outside the sample range
// extrapolates linearly with the end slopes.
class MonotoneCubic {
public:
  MonotoneCubic() = default;
  MonotoneCubic(std::vector<double> times, std::vector<double> values);

  double value(double t) const;
  double derivative(double t) const;

  double t_min() const { return t_.front(); }
  double t_max() const { return t_.back(); }

private:
  std::vector<double> t_, y_, slope_;
  std::size_t interval(double t) const;
};

}  // namespace clwn
