#include "clwn/automorphic.hpp"

#include <cmath>
#include <numbers>

#include "clwn/errors.hpp"

namespace clwn {

namespace {
constexpr double kOrbitPoleTol = 1e-12;

void guard_off_limit_set(const FuchsianGroup& group, Complex z,
                         const char* what) {
  if (group.generator_count() == 0) return;
  const auto probe = group.is_second_kind_at(z, 0);  // cached certificate
  if (!probe.second_kind) {
    throw NearLimitSet(std::string(what) +
                       " is within tolerance of the sampled limit set");
  }
}
}  // namespace

MatRate operator*(const MatRate& x, const MatRate& y) {
  auto mul = [](const std::array<double, 4>& p, const std::array<double, 4>& q) {
    return std::array<double, 4>{
        p[0] * q[0] + p[1] * q[2], p[0] * q[1] + p[1] * q[3],
        p[2] * q[0] + p[3] * q[2], p[2] * q[1] + p[3] * q[3]};
  };
  MatRate out;
  out.m = mul(x.m, y.m);
  const auto rm = mul(x.r, y.m);
  const auto mr = mul(x.m, y.r);
  for (int i = 0; i < 4; ++i) out.r[i] = rm[i] + mr[i];
  return out;
}

GroupVelocity GroupVelocity::zero(int generator_count) {
  return GroupVelocity(std::vector<std::array<double, 4>>(
      static_cast<std::size_t>(generator_count), {0, 0, 0, 0}));
}

GroupVelocity GroupVelocity::validated(const FuchsianGroup& group,
                                       std::vector<std::array<double, 4>> rates,
                                       double tol) {
  if (static_cast<int>(rates.size()) != group.generator_count()) {
    throw ConfigError("velocity rate count must match generator count");
  }
  for (int i = 0; i < group.generator_count(); ++i) {
    const MoebiusMap& g = group.generator(i + 1);
    const auto& r = rates[static_cast<std::size_t>(i)];
    const double det_rate =
        r[0] * g.d() + g.a() * r[3] - r[1] * g.c() - g.b() * r[2];
    if (std::fabs(det_rate) > tol) {
      throw ConfigError("velocity of generator " + std::to_string(i + 1) +
                        " violates the determinant-one constraint");
    }
  }
  return GroupVelocity(std::move(rates));
}

GroupVelocity GroupVelocity::from_family(
    const std::function<FuchsianGroup(double)>& family, double t, double step) {
  const FuchsianGroup plus = family(t + step);
  const FuchsianGroup minus = family(t - step);
  if (plus.generator_count() != minus.generator_count()) {
    throw ConfigError("group family changes generator count");
  }
  std::vector<std::array<double, 4>> rates;
  for (int i = 1; i <= plus.generator_count(); ++i) {
    const MoebiusMap &p = plus.generator(i), &m = minus.generator(i);
    rates.push_back({(p.a() - m.a()) / (2 * step), (p.b() - m.b()) / (2 * step),
                     (p.c() - m.c()) / (2 * step),
                     (p.d() - m.d()) / (2 * step)});
  }
  return GroupVelocity(std::move(rates));
}

const std::array<double, 4>& GroupVelocity::rate(int index_1based) const {
  return rates_.at(static_cast<std::size_t>(index_1based - 1));
}

MatRate GroupVelocity::letter(const FuchsianGroup& group, int letter) const {
  const MoebiusMap& g = group.generator(std::abs(letter));
  const auto& r = rate(std::abs(letter));
  MatRate out;
  if (letter > 0) {
    out.m = {g.a(), g.b(), g.c(), g.d()};
    out.r = r;
  } else {
    // Adjugate of a determinant-one matrix is its inverse; the adjugate of
    // the rate is the rate of the inverse.
    out.m = {g.d(), -g.b(), -g.c(), g.a()};
    out.r = {r[3], -r[1], -r[2], r[0]};
  }
  return out;
}

MatRate GroupVelocity::word(const FuchsianGroup& group, const Word& w) const {
  MatRate out = MatRate::identity();
  for (int l : w.letters) out = out * letter(group, l);
  return out;
}

GroupVelocity GroupVelocity::scaled(double factor) const {
  auto rates = rates_;
  for (auto& r : rates) {
    for (double& x : r) x *= factor;
  }
  return GroupVelocity(std::move(rates));
}

Complex velocity_at(const MatRate& mr, Complex z) {
  const Complex den = mr.m[2] * z + mr.m[3];
  const Complex num = (mr.r[0] * z + mr.r[1]) * den -
                      (mr.m[0] * z + mr.m[1]) * (mr.r[2] * z + mr.r[3]);
  return num / (den * den);
}

double velocity_at_real(const MatRate& mr, double x) {
  const double den = mr.m[2] * x + mr.m[3];
  const double num = (mr.r[0] * x + mr.r[1]) * den -
                     (mr.m[0] * x + mr.m[1]) * (mr.r[2] * x + mr.r[3]);
  return num / (den * den);
}

double dlog_deriv_dt(const MatRate& rho, double y, double ydot) {
  // rho'(y) = D/(cy+d)^2 with D = ad - bc, hence
  // d/dt log rho'(y(t)) = Ddot/D - 2 (cdot y + ddot + c ydot)/(c y + d).
  const double D = rho.m[0] * rho.m[3] - rho.m[1] * rho.m[2];
  const double Ddot = rho.r[0] * rho.m[3] + rho.m[0] * rho.r[3] -
                      rho.r[1] * rho.m[2] - rho.m[1] * rho.r[2];
  const double den = rho.m[2] * y + rho.m[3];
  return Ddot / D - 2.0 * (rho.r[2] * y + rho.r[3] + rho.m[2] * ydot) / den;
}

Complex total_velocity(const MatRate& mr, Complex z, Complex zdot) {
  const double D = mr.m[0] * mr.m[3] - mr.m[1] * mr.m[2];
  const Complex den = mr.m[2] * z + mr.m[3];
  return velocity_at(mr, z) + D / (den * den) * zdot;
}

Complex word_velocity(const FuchsianGroup& group, const GroupVelocity& velocity,
                      const Word& w, Complex z) {
  if (!is_reduced(w)) throw ConfigError("word must be reduced");
  const MatRate mr = velocity.word(group, w);
  const Complex den = mr.m[2] * z + mr.m[3];
  if (std::abs(den) < kOrbitPoleTol) {
    throw PoleEncountered("word velocity requested at the pole of " + w.str());
  }
  return velocity_at(mr, z);
}

OrbitTables build_orbit_tables(const FuchsianGroup& group,
                               const GroupVelocity& velocity, double c,
                               const EnumerationPolicy& policy) {
  OrbitTables t;
  t.n = group.generator_count();
  t.c = c;
  t.max_word_length = policy.max_word_length;
  t.entries = group.ball(policy.max_word_length);

  t.shell_start.assign(1, 0);
  std::size_t len = 0;
  for (std::size_t i = 0; i < t.entries.size(); ++i) {
    while (t.entries[i].word.length() > len) {
      t.shell_start.push_back(i);
      ++len;
    }
  }
  t.shell_start.push_back(t.entries.size());

  for (int k = 1; k <= t.n; ++k) {
    const MatRate g = velocity.letter(group, k);
    t.base_points.push_back(group.generator(k).apply_boundary(ExtReal::of(c)).value);
    t.base_rates.push_back(velocity_at_real(g, c));
  }

  t.word_rates.reserve(t.entries.size());
  t.v.reserve(t.entries.size());
  t.vdot.reserve(t.entries.size());
  t.u.resize(t.entries.size() * static_cast<std::size_t>(t.n));
  t.udot.resize(t.entries.size() * static_cast<std::size_t>(t.n));
  for (std::size_t i = 0; i < t.entries.size(); ++i) {
    const MatRate mr = velocity.word(group, t.entries[i].word);
    t.word_rates.push_back(mr);
    const double den = mr.m[2] * c + mr.m[3];
    t.v.push_back((mr.m[0] * c + mr.m[1]) / den);
    t.vdot.push_back(velocity_at_real(mr, c));
    const double D = mr.m[0] * mr.m[3] - mr.m[1] * mr.m[2];
    for (int k = 0; k < t.n; ++k) {
      const double s = t.base_points[static_cast<std::size_t>(k)];
      const double dk = mr.m[2] * s + mr.m[3];
      t.u[i * static_cast<std::size_t>(t.n) + static_cast<std::size_t>(k)] =
          (mr.m[0] * s + mr.m[1]) / dk;
      // d/dt phi(psi_k(c)) = phidot(s_k) + phi'(s_k) * eta_k.
      t.udot[i * static_cast<std::size_t>(t.n) + static_cast<std::size_t>(k)] =
          velocity_at_real(mr, s) +
          D / (dk * dk) * t.base_rates[static_cast<std::size_t>(k)];
    }
  }
  return t;
}

namespace {

// Shell-wise accumulation: f(word_index) is added shell by shell; the
// returned tail is the magnitude of the outermost shell (0 when the ball is
// just the identity).
template <typename F>
SeriesValue accumulate_shells(const OrbitTables& t, F&& f) {
  SeriesValue out;
  Complex last_shell{0.0, 0.0};
  for (std::size_t s = 0; s + 1 < t.shell_start.size(); ++s) {
    Complex shell{0.0, 0.0};
    for (std::size_t i = t.shell_start[s]; i < t.shell_start[s + 1]; ++i) {
      shell += f(i);
    }
    out.value += shell;
    last_shell = shell;
  }
  out.tail_estimate =
      t.shell_start.size() > 2 ? std::abs(last_shell) : 0.0;
  return out;
}

}  // namespace

SeriesValue upsilon_tables(const OrbitTables& t, double xi, Complex z) {
  SeriesValue out = accumulate_shells(t, [&](std::size_t i) {
    const Complex fz = t.entries[i].map.apply(z);
    if (std::abs(fz - xi) < kOrbitPoleTol) {
      throw PoleEncountered("upsilon evaluated on the orbit of xi (word " +
                            t.entries[i].word.str() + ")");
    }
    return 1.0 / (fz - xi) - 1.0 / (t.v[i] - xi);
  });
  return out;
}

SeriesValue upsilon(const FuchsianGroup& group, double xi, double c, Complex z,
                    const EnumerationPolicy& policy) {
  guard_off_limit_set(group, z, "evaluation point");
  guard_off_limit_set(group, Complex(c, 0.0), "base point c");
  const OrbitTables t = build_orbit_tables(
      group, GroupVelocity::zero(group.generator_count()), c, policy);
  return upsilon_tables(t, xi, z);
}

SeriesValue k_functional_tables(const OrbitTables& t,
                                const FuchsianGroup& group, double xi,
                                const Word& rho) {
  const ExtReal rc = group.evaluate(rho).apply_boundary(ExtReal::of(t.c));
  if (rc.is_inf) throw PoleEncountered("rho(c) is infinite");
  return accumulate_shells(t, [&](std::size_t i) {
    const ExtReal frc = t.entries[i].map.apply_boundary(rc);
    if (frc.is_inf || std::fabs(frc.value - xi) < kOrbitPoleTol) {
      throw PoleEncountered("k_functional hit the orbit of xi (word " +
                            t.entries[i].word.str() + ")");
    }
    return Complex(1.0 / (frc.value - xi) - 1.0 / (t.v[i] - xi), 0.0);
  });
}

SeriesValue k_functional(const FuchsianGroup& group, double xi, double c,
                         const Word& rho, const EnumerationPolicy& policy) {
  guard_off_limit_set(group, Complex(c, 0.0), "base point c");
  const OrbitTables t = build_orbit_tables(
      group, GroupVelocity::zero(group.generator_count()), c, policy);
  return k_functional_tables(t, group, xi, rho);
}

namespace {

// Factor log of psi / chi style products for one word, with branch tracking:
// outer shells contribute factors close to 1, a large imaginary log flags a
// shell that is too coarse.
Complex checked_log(Complex factor, unsigned* flags) {
  const Complex lg = std::log(factor);
  if (std::fabs(lg.imag()) >= std::numbers::pi / 2.0) {
    *flags |= SeriesValue::kBranchWarning;
  }
  return lg;
}

}  // namespace

SeriesValue psi(const FuchsianGroup& group, double c, const Word& psi_word,
                Complex z, const EnumerationPolicy& policy) {
  guard_off_limit_set(group, z, "evaluation point");
  guard_off_limit_set(group, Complex(c, 0.0), "base point c");
  const OrbitTables t = build_orbit_tables(
      group, GroupVelocity::zero(group.generator_count()), c, policy);
  const ExtReal pc = group.evaluate(psi_word).apply_boundary(ExtReal::of(c));
  if (pc.is_inf) throw PoleEncountered("psi(c) is infinite");

  unsigned flags = 0;
  SeriesValue logsum = accumulate_shells(t, [&](std::size_t i) {
    const ExtReal up = t.entries[i].map.apply_boundary(pc);
    if (up.is_inf) throw PoleEncountered("orbit point at infinity");
    const Complex zu = z - up.value;
    const Complex zv = z - t.v[i];
    if (std::abs(zu) < kOrbitPoleTol || std::abs(zv) < kOrbitPoleTol) {
      throw ZeroDenominator("psi evaluated on the orbit of c (word " +
                            t.entries[i].word.str() + ")");
    }
    return 2.0 * checked_log(zu / zv, &flags);
  });
  SeriesValue out;
  out.value = std::exp(logsum.value);
  out.tail_estimate = logsum.tail_estimate;  // relative for products
  out.flags = flags;
  return out;
}

SeriesValue psi_k(const FuchsianGroup& group, double c, int k, Complex z,
                  const EnumerationPolicy& policy) {
  return psi(group, c, Word::generator(k), z, policy);
}

SeriesValue char_chi(const FuchsianGroup& group, double c, const Word& psi_word,
                     const Word& rho, const EnumerationPolicy& policy) {
  guard_off_limit_set(group, Complex(c, 0.0), "base point c");
  const OrbitTables t = build_orbit_tables(
      group, GroupVelocity::zero(group.generator_count()), c, policy);
  const MoebiusMap rho_map = group.evaluate(rho);
  const ExtReal pc = group.evaluate(psi_word).apply_boundary(ExtReal::of(c));
  if (pc.is_inf) throw PoleEncountered("psi(c) is infinite");

  unsigned flags = 0;
  SeriesValue logsum = accumulate_shells(t, [&](std::size_t i) {
    const ExtReal up = t.entries[i].map.apply_boundary(pc);
    if (up.is_inf) throw PoleEncountered("orbit point at infinity");
    const Complex du = rho_map.derivative(Complex(up.value, 0.0));
    const Complex dv = rho_map.derivative(Complex(t.v[i], 0.0));
    if (std::abs(du) == 0.0 || std::abs(dv) == 0.0) {
      throw ZeroDenominator("character factor degenerate");
    }
    return checked_log(du / dv, &flags);
  });
  SeriesValue out;
  out.value = std::exp(logsum.value);
  out.tail_estimate = logsum.tail_estimate;
  out.flags = flags;
  return out;
}

SeriesValue char_chi_k(const FuchsianGroup& group, double c, int k,
                       const Word& rho, const EnumerationPolicy& policy) {
  return char_chi(group, c, Word::generator(k), rho, policy);
}

SeriesValue char_log_deriv_tables(const OrbitTables& t,
                                  const FuchsianGroup& group,
                                  const GroupVelocity& velocity, int k,
                                  const Word& rho) {
  const MatRate rho_mr = velocity.word(group, rho);
  const std::size_t kk = static_cast<std::size_t>(k - 1);
  return accumulate_shells(t, [&](std::size_t i) {
    const std::size_t idx = i * static_cast<std::size_t>(t.n) + kk;
    const double term_u = dlog_deriv_dt(rho_mr, t.u[idx], t.udot[idx]);
    const double term_v = dlog_deriv_dt(rho_mr, t.v[i], t.vdot[i]);
    return Complex(term_u - term_v, 0.0);
  });
}

SeriesValue j_functional(const FuchsianGroup& group,
                         const GroupVelocity& velocity, double c,
                         const std::vector<double>& deltas, const Word& rho,
                         const EnumerationPolicy& policy) {
  if (static_cast<int>(deltas.size()) != group.generator_count()) {
    throw ConfigError("deltas length must equal the generator count");
  }
  guard_off_limit_set(group, Complex(c, 0.0), "base point c");
  const OrbitTables t = build_orbit_tables(group, velocity, c, policy);
  SeriesValue out;
  for (int k = 1; k <= t.n; ++k) {
    const SeriesValue lk = char_log_deriv_tables(t, group, velocity, k, rho);
    out.value += deltas[static_cast<std::size_t>(k - 1)] * lk.value;
    out.tail_estimate +=
        std::fabs(deltas[static_cast<std::size_t>(k - 1)]) * lk.tail_estimate;
    out.flags |= lk.flags;
  }
  return out;
}

SeriesValue log_deriv_psi_tables(const OrbitTables& t,
                                 const std::vector<double>& deltas, Complex z) {
  return accumulate_shells(t, [&](std::size_t i) {
    Complex term{0.0, 0.0};
    for (int k = 0; k < t.n; ++k) {
      const std::size_t idx =
          i * static_cast<std::size_t>(t.n) + static_cast<std::size_t>(k);
      const Complex zu = z - t.u[idx];
      const Complex zv = z - t.v[i];
      if (std::abs(zu) < kOrbitPoleTol || std::abs(zv) < kOrbitPoleTol) {
        throw ZeroDenominator("log_deriv_psi evaluated on the orbit of c");
      }
      term += deltas[static_cast<std::size_t>(k)] * 2.0 * (1.0 / zu - 1.0 / zv);
    }
    return term;
  });
}

SeriesValue log_deriv_psi(const FuchsianGroup& group, double c,
                          const std::vector<double>& deltas, Complex z,
                          const EnumerationPolicy& policy) {
  if (static_cast<int>(deltas.size()) != group.generator_count()) {
    throw ConfigError("deltas length must equal the generator count");
  }
  guard_off_limit_set(group, z, "evaluation point");
  const OrbitTables t = build_orbit_tables(
      group, GroupVelocity::zero(group.generator_count()), c, policy);
  return log_deriv_psi_tables(t, deltas, z);
}

SeriesValue time_deriv_psi_tables(const OrbitTables& t, int k, Complex z) {
  const std::size_t kk = static_cast<std::size_t>(k - 1);
  return accumulate_shells(t, [&](std::size_t i) {
    const std::size_t idx = i * static_cast<std::size_t>(t.n) + kk;
    const Complex zu = z - t.u[idx];
    const Complex zv = z - t.v[i];
    if (std::abs(zu) < kOrbitPoleTol || std::abs(zv) < kOrbitPoleTol) {
      throw ZeroDenominator("time_deriv_psi evaluated on the orbit of c");
    }
    return 2.0 * (t.vdot[i] / zv - t.udot[idx] / zu);
  });
}

SeriesValue time_deriv_psi(const FuchsianGroup& group,
                           const GroupVelocity& velocity, double c, int k,
                           Complex z, const EnumerationPolicy& policy) {
  guard_off_limit_set(group, z, "evaluation point");
  const OrbitTables t = build_orbit_tables(group, velocity, c, policy);
  return time_deriv_psi_tables(t, k, z);
}

}  // namespace clwn
