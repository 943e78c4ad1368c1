#include "clwn/field.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "clwn/errors.hpp"

namespace clwn {

namespace {

constexpr double kOrbitPoleTol = 1e-12;
constexpr double kDenominatorZeroTol = 1e-6;

// Dense solve with partial pivoting plus a 1-norm condition estimate from
// the explicit inverse; n is the generator count, tiny in practice.
struct SmallSolve {
  std::vector<double> x;
  double cond = 0.0;
};

SmallSolve solve_small(std::vector<std::vector<double>> a,
                       std::vector<double> b) {
  const std::size_t n = b.size();
  // Augment with the identity to extract the inverse for the estimate.
  for (std::size_t i = 0; i < n; ++i) {
    a[i].resize(2 * n + 1, 0.0);
    a[i][n] = b[i];
    a[i][n + 1 + i] = 1.0;
  }
  double norm_a = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    double col = 0.0;
    for (std::size_t i = 0; i < n; ++i) col += std::fabs(a[i][j]);
    norm_a = std::max(norm_a, col);
  }
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t i = col + 1; i < n; ++i) {
      if (std::fabs(a[i][col]) > std::fabs(a[pivot][col])) pivot = i;
    }
    if (std::fabs(a[pivot][col]) < 1e-300) {
      throw SingularSystem("delta system pivot vanished");
    }
    std::swap(a[col], a[pivot]);
    const double inv = 1.0 / a[col][col];
    for (auto& v : a[col]) v *= inv;
    for (std::size_t i = 0; i < n; ++i) {
      if (i == col) continue;
      const double f = a[i][col];
      if (f == 0.0) continue;
      for (std::size_t j = col; j < a[i].size(); ++j) a[i][j] -= f * a[col][j];
    }
  }
  SmallSolve out;
  out.x.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.x[i] = a[i][n];
  double norm_inv = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    double col = 0.0;
    for (std::size_t i = 0; i < n; ++i) col += std::fabs(a[i][n + 1 + j]);
    norm_inv = std::max(norm_inv, col);
  }
  out.cond = norm_a * norm_inv;
  return out;
}

}  // namespace

DeltaSystem solve_deltas(const FuchsianGroup& group,
                         const GroupVelocity& velocity, double xi, double c,
                         const EnumerationPolicy& policy) {
  const int n = group.generator_count();
  if (n < 1) throw ConfigError("delta system needs at least one generator");

  const OrbitTables tables = build_orbit_tables(group, velocity, c, policy);

  DeltaSystem sys;
  sys.matrix.assign(static_cast<std::size_t>(n),
                    std::vector<double>(static_cast<std::size_t>(n), 0.0));
  sys.rhs.resize(static_cast<std::size_t>(n));
  double tails = 0.0;
  for (int j = 1; j <= n; ++j) {
    const Word gen = Word::generator(j);
    for (int k = 1; k <= n; ++k) {
      const SeriesValue l =
          char_log_deriv_tables(tables, group, velocity, k, gen);
      sys.matrix[j - 1][k - 1] = l.value.real();
      tails += l.tail_estimate;
    }
    const SeriesValue kf = k_functional_tables(tables, group, xi, gen);
    sys.rhs[j - 1] = -kf.value.real();
    tails += kf.tail_estimate;
  }
  sys.tail_estimate = tails;

  SmallSolve solved = solve_small(sys.matrix, sys.rhs);
  sys.condition_estimate = solved.cond;
  if (!(solved.cond < 1e12)) {
    throw SingularSystem(
        "delta system condition estimate " + std::to_string(solved.cond) +
        " exceeds 1e12; truncation too coarse or group degenerating");
  }
  sys.deltas = std::move(solved.x);

  double res = 0.0, bnorm = 0.0;
  for (int j = 0; j < n; ++j) {
    double r = -sys.rhs[j];
    for (int k = 0; k < n; ++k) r += sys.matrix[j][k] * sys.deltas[k];
    res += r * r;
    bnorm += sys.rhs[j] * sys.rhs[j];
  }
  sys.residual = bnorm > 0.0 ? std::sqrt(res / bnorm) : std::sqrt(res);
  return sys;
}

FieldContext::FieldContext(const FuchsianGroup& group,
                           const GroupVelocity& velocity, double xi,
                           double lambda, double c,
                           const EnumerationPolicy& policy, FieldMode mode)
    : group_(group),
      velocity_(velocity),
      xi_(xi),
      lambda_(lambda),
      c_(c),
      policy_(policy),
      mode_(mode),
      tables_(build_orbit_tables(group, velocity, c, policy)) {}

FieldContext FieldContext::build(const FuchsianGroup& group,
                                 const GroupVelocity& velocity, double xi,
                                 double lambda, double c,
                                 const EnumerationPolicy& policy,
                                 FieldMode mode) {
  const int depth = std::min(policy.max_word_length, 4);
  const auto c_probe = group.is_second_kind_at(c, depth);
  if (!c_probe.second_kind) {
    throw GuardTripped("base point c has margin " +
                       std::to_string(c_probe.margin) +
                       " against the sampled limit set");
  }
  const auto xi_probe = group.is_second_kind_at(xi, depth);
  if (!xi_probe.second_kind) {
    throw GuardTripped("driving value xi has margin " +
                       std::to_string(xi_probe.margin) +
                       " against the sampled limit set");
  }
  FieldContext ctx(group, velocity, xi, lambda, c, policy, mode);
  ctx.system_ = solve_deltas(group, velocity, xi, c, policy);
  ctx.refresh_xi_derived();
  return ctx;
}

FieldContext FieldContext::with_driving(double xi, double lambda) const {
  FieldContext ctx = *this;
  ctx.xi_ = xi;
  ctx.lambda_ = lambda;
  ctx.refresh_xi_derived();
  return ctx;
}

void FieldContext::refresh_xi_derived() {
  // sigma = -(1/2) * Psi'/Psi(xi), i.e. minus the denominator sum at xi.
  const SeriesValue s = log_deriv_psi_tables(tables_, system_.deltas, xi_);
  sigma_ = -0.5 * s.value.real();
  xi_orbit_.clear();
  xi_orbit_.reserve(tables_.words());
  for (const auto& e : tables_.entries) {
    const ExtReal w = e.map.inverse().apply_boundary(ExtReal::of(xi_));
    if (w.finite()) xi_orbit_.push_back(w.value);
  }
}

SeriesValue FieldContext::denominator(Complex z) const {
  return log_deriv_psi_tables(tables_, system_.deltas, z);
}

double FieldContext::nearest_xi_orbit_distance(Complex z) const {
  double d = std::numeric_limits<double>::infinity();
  for (double w : xi_orbit_) d = std::min(d, std::abs(z - Complex(w, 0.0)));
  return d;
}

double FieldContext::nearest_denominator_zero_distance(Complex z) const {
  double d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < tables_.words(); ++i) {
    d = std::min(d, std::abs(z - Complex(tables_.v[i], 0.0)));
    for (int k = 0; k < tables_.n; ++k) {
      d = std::min(d, std::abs(z - Complex(tables_.orbit_point(i, k), 0.0)));
    }
  }
  return d;
}

SeriesValue FieldContext::eval_P(Complex z) const {
  const double zero_dist = nearest_denominator_zero_distance(z);
  if (zero_dist < kDenominatorZeroTol) {
    throw DenominatorVanishes(
        "evaluation within " + std::to_string(zero_dist) +
        " of a denominator zero on the orbit of c; the truncated series "
        "cannot cancel there");
  }

  const int n = tables_.n;
  const auto& deltas = system_.deltas;
  Complex num{0.0, 0.0}, den{0.0, 0.0};
  Complex num_shell{0.0, 0.0}, den_shell{0.0, 0.0};
  double num_tail = 0.0, den_tail = 0.0;
  const std::size_t shells = tables_.shell_start.size() - 1;
  for (std::size_t s = 0; s < shells; ++s) {
    num_shell = Complex{0.0, 0.0};
    den_shell = Complex{0.0, 0.0};
    for (std::size_t i = tables_.shell_start[s]; i < tables_.shell_start[s + 1];
         ++i) {
      const Complex fz = tables_.entries[i].map.apply(z);
      if (std::abs(fz - xi_) < kOrbitPoleTol) {
        throw PoleEncountered("P evaluated on the orbit of xi (word " +
                              tables_.entries[i].word.str() + ")");
      }
      const Complex zv = z - tables_.v[i];
      Complex w_term{0.0, 0.0}, s_term{0.0, 0.0};
      for (int k = 0; k < n; ++k) {
        const std::size_t idx =
            i * static_cast<std::size_t>(n) + static_cast<std::size_t>(k);
        const Complex zu = z - tables_.u[idx];
        w_term += deltas[static_cast<std::size_t>(k)] * 2.0 *
                  (tables_.vdot[i] / zv - tables_.udot[idx] / zu);
        s_term += deltas[static_cast<std::size_t>(k)] * 2.0 *
                  (1.0 / zu - 1.0 / zv);
      }
      num_shell += 1.0 / (fz - xi_) - 1.0 / (tables_.v[i] - xi_) + w_term;
      den_shell += s_term;
    }
    num += num_shell;
    den += den_shell;
  }
  if (shells > 1) {
    num_tail = std::abs(num_shell);
    den_tail = std::abs(den_shell);
  }

  if (std::abs(den) < 10.0 * den_tail || std::abs(den) == 0.0) {
    throw DenominatorVanishes(
        "denominator magnitude " + std::to_string(std::abs(den)) +
        " is below its truncation noise floor " + std::to_string(den_tail));
  }

  SeriesValue out;
  if (mode_ == FieldMode::Normalized) {
    out.value = (lambda_ + 4.0 * sigma_ * num) / den;
    num_tail *= std::fabs(4.0 * sigma_);
  } else {
    out.value = (lambda_ + num) / den;
  }
  out.tail_estimate =
      (num_tail + std::abs(out.value) * den_tail) / std::abs(den);
  return out;
}

EquivarianceCheck FieldContext::equivariance_residual(const Word& w,
                                                      Complex z) const {
  const MoebiusMap map = group_.evaluate(w);
  const Complex wz = map.apply(z);
  const SeriesValue p_at = eval_P(wz);
  const SeriesValue p = eval_P(z);
  const Complex wdot = word_velocity(group_, velocity_, w, z);
  const Complex defect = p_at.value - map.derivative(z) * p.value +
                         speed_factor() * wdot;
  EquivarianceCheck out;
  out.residual = std::abs(defect);
  out.combined_tail =
      p_at.tail_estimate + std::abs(map.derivative(z)) * p.tail_estimate;
  return out;
}

SeriesValue FieldContext::xi_minus_upsilon(Complex z) const {
  // Xi = (Psi'/Psi) P - sum_k delta_k Psi_k./Psi_k, assembled from separate
  // series evaluations so the test exercises the full pipeline.
  const SeriesValue p = eval_P(z);
  const SeriesValue s = denominator(z);
  SeriesValue w;
  for (int k = 1; k <= tables_.n; ++k) {
    const SeriesValue tk = time_deriv_psi_tables(tables_, k, z);
    w.value += system_.deltas[static_cast<std::size_t>(k - 1)] * tk.value;
    w.tail_estimate += std::fabs(system_.deltas[static_cast<std::size_t>(k - 1)]) *
                       tk.tail_estimate;
  }
  const SeriesValue u = upsilon_tables(tables_, xi_, z);
  SeriesValue out;
  const double speed = speed_factor();
  // In normalized mode P = speed * P_raw; undo the scale so Xi - Upsilon
  // stays the raw diagnostic.
  out.value = s.value * (p.value / speed) - w.value - u.value;
  out.tail_estimate = s.tail_estimate * std::abs(p.value / speed) +
                      std::abs(s.value) * p.tail_estimate / speed +
                      w.tail_estimate + u.tail_estimate;
  return out;
}

bool FieldContext::pole_sign_ok(double eps) const {
  const SeriesValue p = eval_P(Complex(xi_, eps));
  return p.value.imag() > 0.0;
}

}  // namespace clwn
