#include "hillzone/criteria.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "hillzone/errors.hpp"

namespace hillzone {

namespace {

constexpr cplx kI{0.0, 1.0};

// Q_0 = int_0^1 Q = int_0^1 (1 - x) q(x) dx.
cplx antiderivative_mean(const PeriodicPotential& q, int truncation) {
  if (const auto* pw = std::get_if<PiecewisePolynomial>(&q.representation())) {
    cplx acc{};
    for (const auto& p : pw->pieces) {
      const double len = p.right - p.left;
      const double w = 1.0 - p.left;
      auto channel = [&](const std::vector<double>& poly) {
        double sum = 0.0;
        double lk1 = len;  // len^{k+1}
        for (std::size_t k = 0; k < poly.size(); ++k) {
          sum += poly[k] * (w * lk1 / static_cast<double>(k + 1) - lk1 * len / static_cast<double>(k + 2));
          lk1 *= len;
        }
        return sum;
      };
      acc += cplx{channel(p.poly_re), channel(p.poly_im)};
    }
    return acc;
  }
  // Q(x) = q_0 x + sum_{m != 0} q_m (e^{2 pi i m x} - 1) / (2 pi i m).
  cplx acc = 0.5 * q.coefficient(0);
  for (int m = truncation; m >= 1; --m) {
    acc -= q.coefficient(m) / (kTwoPi * kI * static_cast<double>(m));
    acc -= q.coefficient(-m) / (kTwoPi * kI * static_cast<double>(-m));
  }
  return acc;
}

}  // namespace

AntiderivativeData antiderivative_coefficients(const PeriodicPotential& q, int n_max) {
  if (n_max < 0) throw NumericsError("n_max must be non-negative");
  if (n_max > q.bandwidth()) throw BandwidthExceeded(n_max, q.bandwidth());
  AntiderivativeData out;
  out.n_max = n_max;
  const int support = q.support();
  const int M = support >= 0 ? std::max(support, 0)
                             : std::min(q.bandwidth(), std::max(2 * n_max, 512));
  out.truncation = M;

  std::vector<cplx> Q(static_cast<std::size_t>(2 * M + 1));
  auto at = [&](int m) -> cplx& { return Q[static_cast<std::size_t>(m + M)]; };
  for (int m = 1; m <= M; ++m) {
    at(m) = q.coefficient(m) / (kTwoPi * kI * static_cast<double>(m));
    at(-m) = q.coefficient(-m) / (kTwoPi * kI * static_cast<double>(-m));
  }
  at(0) = antiderivative_mean(q, M);
  out.Q0 = at(0);

  for (int n = -n_max; n <= n_max; ++n) {
    cplx s{};
    const int lo = std::max(-M, n - M);
    const int hi = std::min(M, n + M);
    for (int m = lo; m <= hi; ++m) s += at(m) * at(n - m);
    out.S[n] = s;
    out.Q[n] = std::abs(n) <= M ? at(n) : cplx{};
  }
  out.S0 = out.S.at(0);

  if (support < 0 && M > 0) {
    // A dropped term of S_n pairs some |m| > M with |n - m| >= M - |n|.
    // Assume |Q_m| decays at least like m^-2 beyond M.
    const double edge = std::max(std::abs(at(M)), std::abs(at(-M)));
    double partner = 0.0;
    for (int k = std::max(M - n_max, 0); k <= M; ++k)
      partner = std::max({partner, std::abs(at(k)), std::abs(at(-k))});
    out.tail_bound = 2.0 * edge * M * partner;
  }
  return out;
}

namespace {

PnRecord assemble(const PeriodicPotential& q, const AntiderivativeData& a, int n) {
  PnRecord r;
  r.n = n;
  const cplx qp = q.coefficient(n);
  const cplx qm = q.coefficient(-n);
  r.q_n = qp.real();
  r.q_minus_n = qm.real();
  r.Q_0 = a.Q0;
  r.Q_n = a.Q.at(n);
  r.Q_minus_n = a.Q.at(-n);
  r.S_n = a.S.at(n);
  r.S_minus_n = a.S.at(-n);
  r.P = qp * qm - qp * (r.S_minus_n - 2.0 * r.Q_0 * r.Q_minus_n) - qm * (r.S_n - 2.0 * r.Q_0 * r.Q_n);
  r.leading_term = (qp * qm).real();
  return r;
}

}  // namespace

PnRecord p_coefficient(const PeriodicPotential& q, int n) {
  if (n < 1) throw NumericsError("P_n is defined for n >= 1");
  const auto a = antiderivative_coefficients(q, n);
  return assemble(q, a, n);
}

std::vector<PnRecord> p_sequence(const PeriodicPotential& q, int n_max) {
  std::vector<PnRecord> out;
  if (n_max < 1) return out;
  const auto a = antiderivative_coefficients(q, n_max);
  out.reserve(static_cast<std::size_t>(n_max));
  for (int n = 1; n <= n_max; ++n) out.push_back(assemble(q, a, n));
  return out;
}

namespace {

void check_window(IndexWindow w) {
  if (w.lo < 1 || w.hi < w.lo) throw NumericsError("index window must satisfy 1 <= lo <= hi");
}

double scaled(double v, int n, int power) { return v * std::pow(static_cast<double>(n), power); }

}  // namespace

Summary4Report summary4_reality(const PeriodicPotential& q, int s, IndexWindow range, std::optional<double> alpha) {
  check_window(range);
  const auto P = p_sequence(q, 2 * range.hi + 1);
  auto value = [&](int k) { return P[static_cast<std::size_t>(k - 1)].P.real(); };
  const int power = 2 * s + 2;

  Summary4Report report;
  report.s = s;
  if (alpha) {
    report.alpha = *alpha;
  } else {
    double smallest = std::numeric_limits<double>::infinity();
    for (int n = range.lo; n <= range.hi; ++n)
      for (int k : {2 * n, 2 * n + 1})
        if (std::abs(value(k)) > kPnNoise) smallest = std::min(smallest, scaled(std::abs(value(k)), k, power));
    report.alpha = std::isfinite(smallest) ? 0.5 * smallest : 0.0;
  }
  auto applicable = [&](int k) {
    const double v = std::abs(value(k));
    return report.alpha > 0.0 && v > kPnNoise && scaled(v, k, power) > report.alpha;
  };
  for (int n = range.lo; n <= range.hi; ++n) {
    RealityPrediction p;
    p.n = n;
    p.P_even = value(2 * n);
    p.P_odd = value(2 * n + 1);
    p.periodic_applicable = applicable(2 * n);
    p.antiperiodic_applicable = applicable(2 * n + 1);
    p.periodic_real = p.P_even >= 0.0;
    p.antiperiodic_real = p.P_odd >= 0.0;
    report.predictions.push_back(p);
  }
  return report;
}

Theorem5Verdict theorem5_check(const PeriodicPotential& q, int s, IndexWindow window) {
  check_window(window);
  const auto P = p_sequence(q, window.hi);
  auto value = [&](int n) { return P[static_cast<std::size_t>(n - 1)].P.real(); };

  Theorem5Verdict v;
  v.window = window;
  int m = window.lo - 1;
  for (int n = window.hi; n >= window.lo; --n) {
    if (!(value(n) < -kPnNoise)) {
      m = n;
      break;
    }
  }
  v.fitted_m = m;
  const int tail = window.hi - m;
  const int needed = (window.hi - window.lo + 2) / 2;
  std::ostringstream note;
  if (tail < needed) {
    note << "P_n < 0 only on (" << m << ", " << window.hi << "], less than the top half of the window";
    v.note = note.str();
    return v;
  }
  double alpha = std::numeric_limits<double>::infinity();
  for (int n = m + 1; n <= window.hi; ++n) alpha = std::min(alpha, scaled(-value(n), n, 2 * s + 2));
  v.fitted_alpha = alpha;
  v.holds = alpha > 0.0;
  note << "window-limited evidence: P_n < -alpha n^(-2s-2) for n in (" << m << ", " << window.hi << "]";
  v.note = note.str();
  return v;
}

Theorem6Verdict theorem6_check(const PeriodicPotential& q, int s, IndexWindow window) {
  check_window(window);
  if (window.hi > q.bandwidth()) throw BandwidthExceeded(window.hi, q.bandwidth());
  Theorem6Verdict v;
  v.window = window;
  double beta = std::numeric_limits<double>::infinity();
  double delta = std::numeric_limits<double>::infinity();
  for (int n = window.lo; n <= window.hi; ++n) {
    const auto [f, g] = q.cosine_sine(n);
    beta = std::min(beta, scaled(std::abs(g), n, s + 1));
    if (f != 0.0) delta = std::min(delta, std::abs(g) / std::abs(f));
  }
  v.fitted_beta = beta;
  if (std::isfinite(delta)) v.fitted_delta = delta;
  const bool beta_ok = beta > kPnNoise;
  const bool delta_ok = !v.fitted_delta || *v.fitted_delta > 1.0;
  v.holds = beta_ok && delta_ok;
  std::ostringstream note;
  if (!beta_ok) note << "g_n vanishes in the window";
  else if (!delta_ok) note << "|g_n| / |f_n| drops to " << *v.fitted_delta << " <= 1";
  else note << "window-limited evidence over [" << window.lo << ", " << window.hi << "]";
  v.note = note.str();
  return v;
}

Theorem7Verdict theorem7_check(const PeriodicPotential& q) {
  std::vector<JumpDeclaration> im, re;
  for (const auto& j : q.jumps()) (j.component == Component::Im ? im : re).push_back(j);
  if (im.size() != 1)
    throw JumpDeclarationRequired("exactly one jump of Im q must be declared, found " + std::to_string(im.size()));
  if (re.size() > 1)
    throw JumpDeclarationRequired("at most one jump of Re q may be declared, found " + std::to_string(re.size()));
  if (!re.empty() && re[0].order != im[0].order)
    throw JumpDeclarationRequired("the jumps of Re q and Im q must be in the same derivative order");
  if (im[0].size == 0.0) throw JumpDeclarationRequired("the declared jump of Im q has size 0");

  Theorem7Verdict v;
  v.s = im[0].order;
  v.c = im[0].size;
  if (!re.empty()) v.d = re[0].size;
  v.holds = std::abs(v.d.value_or(0.0)) < std::abs(v.c);

  bool any = false;
  for (int n : {64, 128, 256}) {
    if (n > q.bandwidth()) continue;
    any = true;
    const double g = q.cosine_sine(n).second;
    const double predicted = std::abs(g) * std::pow(kTwoPi * n, v.s + 1);
    v.decay_consistency = std::max(v.decay_consistency, std::abs(predicted - std::abs(v.c)) / std::abs(v.c));
  }
  if (!any) throw BandwidthExceeded(64, q.bandwidth());
  v.decay_warning = v.decay_consistency > 0.2;
  return v;
}

CriteriaReport criteria_report(const PeriodicPotential& q, const CriteriaOptions& options) {
  check_window(options.window);
  CriteriaReport r;
  r.s = options.s.value_or(q.smoothness());
  r.window = options.window;
  const int n_max = 2 * options.window.hi + 1;
  const auto a = antiderivative_coefficients(q, n_max);
  r.tail_bound = a.tail_bound;
  for (int n = 1; n <= n_max; ++n) {
    r.records.push_back(assemble(q, a, n));
    r.max_abs_im_P = std::max(r.max_abs_im_P, std::abs(r.records.back().P.imag()));
  }
  r.summary4 = summary4_reality(q, r.s, options.window, options.alpha);
  r.thm5 = theorem5_check(q, r.s, options.window);
  r.thm6 = theorem6_check(q, r.s, options.window);
  if (q.jumps().empty()) {
    r.thm7_note = "no jumps declared";
  } else {
    r.thm7 = theorem7_check(q);
    if (r.thm7->decay_warning)
      r.thm7_note = "coefficient decay deviates from the declared jump by more than 20%";
  }

  std::ostringstream why;
  if (r.thm7 && r.thm7->holds && !r.thm7->decay_warning) {
    r.combined = AlgebraicVerdict::FiniteZone;
    why << "declared jump of Im q (c = " << r.thm7->c << ") dominates Re q (d = " << r.thm7->d.value_or(0.0)
        << ") at derivative order " << r.thm7->s;
  } else if (options.assert_asymptotic && (r.thm5.holds || r.thm6.holds)) {
    r.combined = AlgebraicVerdict::FiniteZone;
    why << "window evidence for " << (r.thm6.holds ? "the g_n/f_n dominance test" : "the P_n sign test")
        << " on [" << options.window.lo << ", " << options.window.hi << "], extended by assertion";
  } else {
    r.combined = AlgebraicVerdict::NotConcluded;
    if (r.thm5.holds || r.thm6.holds)
      why << "window evidence holds but finite windows do not prove the asymptotic hypotheses "
             "(pass --assert-asymptotic to accept them)";
    else
      why << "no sufficient criterion holds on the window";
  }
  r.combined_reason = why.str();
  return r;
}

std::string to_string(AlgebraicVerdict v) {
  return v == AlgebraicVerdict::FiniteZone ? "FiniteZone" : "NotConcluded";
}

}  // namespace hillzone
