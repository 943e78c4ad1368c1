#pragma once

#include <optional>
#include <vector>

#include "clwn/automorphic.hpp"

namespace clwn {

enum class FieldMode { Raw, Normalized };

struct DeltaSystem {
  std::vector<double> deltas;
  std::vector<std::vector<double>> matrix;  // rows: generators j, cols: k
  std::vector<double> rhs;                  // -K(psi_j)
  double condition_estimate = 0.0;
  double residual = 0.0;  // ||A d - b|| / ||b||
  double tail_estimate = 0.0;
};

// Assemble and solve the linear system
//   sum_k delta_k * d/dt log chi_k(psi_j) = -K(psi_j),   j = 1..n,
// by a pivoted dense factorization.  Throws SingularSystem when the
// condition estimate exceeds 1e12 (truncation too coarse or the group is
// degenerating; in exact arithmetic the system is always invertible).
DeltaSystem solve_deltas(const FuchsianGroup& group,
                         const GroupVelocity& velocity, double xi, double c,
                         const EnumerationPolicy& policy);

struct EquivarianceCheck {
  double residual = 0.0;
  double combined_tail = 0.0;
};

// Everything needed to evaluate the Loewner vector field P(z, t) at one
// instant.  The assembly is
//
//   P_raw(z) = [lambda + Upsilon(z) + sum_k delta_k Psi_k./Psi_k (z)]
//              / [Psi'/Psi (z)],
//
// which satisfies P(phi(z)) = phi'(z) P(z) - phidot(z) for every word once
// the deltas solve the system above.  Normalized mode rescales by 4 sigma so
// the residue at xi is exactly -2; flows consume that canonical speed.
class FieldContext {
public:
  static FieldContext build(const FuchsianGroup& group,
                            const GroupVelocity& velocity, double xi,
                            double lambda, double c,
                            const EnumerationPolicy& policy,
                            FieldMode mode = FieldMode::Raw);

  // Cheap rebuild with new driving values: reuses the orbit tables and the
  // solved deltas, recomputes sigma and the xi-orbit.  Used by the flows
  // inside one mesh step.
  FieldContext with_driving(double xi, double lambda) const;

  SeriesValue eval_P(Complex z) const;

  // P(w(z)) - w'(z) P(z) + s * wdot(z) with s the mode's speed factor;
  // the central correctness functional of the whole assembly.
  EquivarianceCheck equivariance_residual(const Word& w, Complex z) const;

  // Xi - Upsilon, which must be invariant under every generator once the
  // deltas are right.
  SeriesValue xi_minus_upsilon(Complex z) const;

  // True when Im P(xi + i eps) > 0, as the negative residue demands.
  bool pole_sign_ok(double eps = 1e-4) const;

  double nearest_xi_orbit_distance(Complex z) const;
  double nearest_denominator_zero_distance(Complex z) const;

  const FuchsianGroup& group() const { return group_; }
  const GroupVelocity& velocity() const { return velocity_; }
  const std::vector<double>& deltas() const { return system_.deltas; }
  const DeltaSystem& delta_system() const { return system_; }
  double sigma() const { return sigma_; }
  double xi() const { return xi_; }
  double lambda() const { return lambda_; }
  double c() const { return c_; }
  FieldMode mode() const { return mode_; }
  const EnumerationPolicy& policy() const { return policy_; }
  const OrbitTables& tables() const { return tables_; }
  double speed_factor() const {
    return mode_ == FieldMode::Normalized ? 4.0 * sigma_ : 1.0;
  }
  const std::vector<double>& xi_orbit() const { return xi_orbit_; }

private:
  FieldContext(const FuchsianGroup& group, const GroupVelocity& velocity,
               double xi, double lambda, double c,
               const EnumerationPolicy& policy, FieldMode mode);

  FuchsianGroup group_;
  GroupVelocity velocity_;
  double xi_;
  double lambda_;
  double c_;
  EnumerationPolicy policy_;
  FieldMode mode_;
  OrbitTables tables_;
  DeltaSystem system_;
  double sigma_ = 0.0;
  std::vector<double> xi_orbit_;  // phi^{-1}(xi) over the ball

  void refresh_xi_derived();
  SeriesValue denominator(Complex z) const;
};

}  // namespace clwn
