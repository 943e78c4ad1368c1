#pragma once

#include <array>
#include <functional>
#include <vector>

#include "clwn/fuchsian.hpp"

namespace clwn {

// Value of a truncated series or product.  Sums carry absolute tail
// estimates (magnitude of the outermost shell), products carry relative ones
// (magnitude of the outermost shell of factor logs).  Tails are heuristic and
// surfaced with every result, never silently trusted.
struct SeriesValue {
  Complex value{0.0, 0.0};
  double tail_estimate = 0.0;
  unsigned flags = 0;

  static constexpr unsigned kBranchWarning = 1u;  // product factor far from 1
};

// 2x2 coefficient matrix together with its entrywise time derivative.
// Products follow the product rule, so a word's pair is the fold of its
// letters' pairs.  The Moebius action is invariant under a simultaneous sign
// flip of both members, which keeps letter normalization harmless.
struct MatRate {
  std::array<double, 4> m{1, 0, 0, 1};  // a b c d
  std::array<double, 4> r{0, 0, 0, 0};

  static MatRate identity() { return MatRate{}; }
};

MatRate operator*(const MatRate& x, const MatRate& y);

// Per-generator coefficient rates (adot, bdot, cdot, ddot) for the
// determinant-one representatives.  Rates must keep d/dt(ad - bc) = 0.
class GroupVelocity {
public:
  static GroupVelocity zero(int generator_count);

  // Validates the determinant-rate condition against the group.
  static GroupVelocity validated(const FuchsianGroup& group,
                                 std::vector<std::array<double, 4>> rates,
                                 double tol = 1e-10);

  // Central finite difference of a smooth family of groups at time t.
  static GroupVelocity from_family(
      const std::function<FuchsianGroup(double)>& family, double t,
      double step);

  int generator_count() const { return static_cast<int>(rates_.size()); }
  const std::array<double, 4>& rate(int index_1based) const;
  const std::vector<std::array<double, 4>>& rates() const { return rates_; }

  // (map, rate) pair of a single signed letter.
  MatRate letter(const FuchsianGroup& group, int letter) const;
  // (map, rate) pair of a reduced word, by the product rule.
  MatRate word(const FuchsianGroup& group, const Word& w) const;

  GroupVelocity scaled(double factor) const;

private:
  explicit GroupVelocity(std::vector<std::array<double, 4>> rates)
      : rates_(std::move(rates)) {}
  std::vector<std::array<double, 4>> rates_;
};

// d/dt of the Moebius image (a z + b)/(c z + d) at frozen z.
Complex velocity_at(const MatRate& mr, Complex z);
double velocity_at_real(const MatRate& mr, double x);

// d/dt log rho'(y(t)) for a moving real point y with speed ydot.
double dlog_deriv_dt(const MatRate& rho, double y, double ydot);

// d/dt [rho_t(z(t))] with both the map and the point moving.
Complex total_velocity(const MatRate& mr, Complex z, Complex zdot);

// Convenience wrapper for the spec operation: d/dt phi_{w,t}(z) at frozen z.
Complex word_velocity(const FuchsianGroup& group, const GroupVelocity& velocity,
                      const Word& w, Complex z);

// Precomputed per-word orbit data for the series below: v = phi(c) and its
// velocity, and for each generator k the pair u = phi(psi_k(c)) with velocity.
// Terms of the same word are always combined before accumulation; the series
// converge only with that pairing.
struct OrbitTables {
  std::vector<BallEntry> entries;        // ball, identity first
  std::vector<std::size_t> shell_start;  // entries index of each shell, + end
  std::vector<MatRate> word_rates;
  std::vector<double> v, vdot;       // per word
  std::vector<double> u, udot;       // word-major, n per word
  std::vector<double> base_points;   // s_k = psi_k(c)
  std::vector<double> base_rates;    // eta_k = d/dt psi_k(c)
  int n = 0;
  double c = 0.0;
  int max_word_length = 0;

  std::size_t words() const { return entries.size(); }
  double orbit_point(std::size_t word, int k) const {
    return u[word * n + k];
  }
  double orbit_rate(std::size_t word, int k) const {
    return udot[word * n + k];
  }
};

OrbitTables build_orbit_tables(const FuchsianGroup& group,
                               const GroupVelocity& velocity, double c,
                               const EnumerationPolicy& policy);

// --- Truncated series of the character-automorphic machinery -------------
//
// psi:           Psi_psi(z)   = prod_phi [(z - phi(psi(c)))/(z - phi(c))]^2
// char_chi:      chi_psi(rho) = prod_phi rho'(phi(psi(c))) / rho'(phi(c))
// upsilon:       sum_phi [ 1/(phi(z)-xi) - 1/(phi(c)-xi) ]
// k_functional:  sum_phi [ 1/(phi(rho(c))-xi) - 1/(phi(c)-xi) ]
// j_functional:  sum_k delta_k * d/dt log chi_k(rho)
// log_deriv_psi: Psi'/Psi = sum_k delta_k sum_phi 2[1/(z-u_k) - 1/(z-v)]
// time_deriv_psi: Psi_k./Psi_k = sum_phi 2[ vdot/(z-v) - udot_k/(z-u_k) ]

SeriesValue psi(const FuchsianGroup& group, double c, const Word& psi_word,
                Complex z, const EnumerationPolicy& policy);
SeriesValue psi_k(const FuchsianGroup& group, double c, int k, Complex z,
                  const EnumerationPolicy& policy);

SeriesValue char_chi(const FuchsianGroup& group, double c, const Word& psi_word,
                     const Word& rho, const EnumerationPolicy& policy);
SeriesValue char_chi_k(const FuchsianGroup& group, double c, int k,
                       const Word& rho, const EnumerationPolicy& policy);

SeriesValue upsilon(const FuchsianGroup& group, double xi, double c, Complex z,
                    const EnumerationPolicy& policy);
SeriesValue upsilon_tables(const OrbitTables& tables, double xi, Complex z);

SeriesValue k_functional(const FuchsianGroup& group, double xi, double c,
                         const Word& rho, const EnumerationPolicy& policy);
SeriesValue k_functional_tables(const OrbitTables& tables,
                                const FuchsianGroup& group, double xi,
                                const Word& rho);

SeriesValue j_functional(const FuchsianGroup& group,
                         const GroupVelocity& velocity, double c,
                         const std::vector<double>& deltas, const Word& rho,
                         const EnumerationPolicy& policy);
// Log-derivative of a single character: d/dt log chi_k(rho).
SeriesValue char_log_deriv_tables(const OrbitTables& tables,
                                  const FuchsianGroup& group,
                                  const GroupVelocity& velocity, int k,
                                  const Word& rho);

SeriesValue log_deriv_psi(const FuchsianGroup& group, double c,
                          const std::vector<double>& deltas, Complex z,
                          const EnumerationPolicy& policy);
SeriesValue log_deriv_psi_tables(const OrbitTables& tables,
                                 const std::vector<double>& deltas, Complex z);

SeriesValue time_deriv_psi(const FuchsianGroup& group,
                           const GroupVelocity& velocity, double c, int k,
                           Complex z, const EnumerationPolicy& policy);
SeriesValue time_deriv_psi_tables(const OrbitTables& tables, int k, Complex z);

}  // namespace clwn
