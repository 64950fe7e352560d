#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hillzone/potential.hpp"

namespace hillzone {

/// Coefficients of Q(x) = int_0^x q and S = Q^2.
struct AntiderivativeData {
  int n_max = 0;
  int truncation = 0;  // largest |m| of Q_m used in the convolution for S
  cplx Q0;
  cplx S0;
  std::map<int, cplx> Q;  // |n| <= n_max, including 0
  std::map<int, cplx> S;  // |n| <= n_max, including 0
  /// Estimated size of the dropped convolution terms; 0 when q has finite
  /// Fourier support.
  double tail_bound = 0.0;
};

/// Q_n = q_n / (2 pi i n) for n != 0 and Q_0 = int_0^1 (1 - x) q(x) dx; S_n by
/// convolution of the Q coefficients. Throws BandwidthExceeded when q cannot
/// resolve index n_max.
AntiderivativeData antiderivative_coefficients(const PeriodicPotential& q, int n_max);

struct PnRecord {
  int n = 1;
  cplx P;
  double q_n = 0.0;
  double q_minus_n = 0.0;
  cplx S_n;
  cplx S_minus_n;
  cplx Q_0;
  cplx Q_n;
  cplx Q_minus_n;
  double leading_term = 0.0;  // q_n q_{-n}
};

/// P_n = q_n q_{-n} - q_n (S_{-n} - 2 Q_0 Q_{-n}) - q_{-n} (S_n - 2 Q_0 Q_n).
PnRecord p_coefficient(const PeriodicPotential& q, int n);

/// Records for n = 1..n_max from one antiderivative computation.
std::vector<PnRecord> p_sequence(const PeriodicPotential& q, int n_max);

struct IndexWindow {
  int lo = 8;
  int hi = 64;
};

/// |P_n| at or below this is treated as zero.
inline constexpr double kPnNoise = 1e-12;

struct RealityPrediction {
  int n = 0;
  double P_even = 0.0;  // P_{2n}, governs lambda_n(0)
  double P_odd = 0.0;   // P_{2n+1}, governs lambda_n(pi)
  bool periodic_applicable = false;
  bool periodic_real = false;
  bool antiperiodic_applicable = false;
  bool antiperiodic_real = false;
};

struct Summary4Report {
  int s = 0;
  double alpha = 0.0;  // constant in the hypothesis |P_k| > alpha k^{-2s-2}
  std::vector<RealityPrediction> predictions;
};

/// Reality predictions for lambda_n(0), lambda_n(pi), n in the range. A
/// prediction is applicable when |P_k| > alpha k^{-2s-2} and |P_k| exceeds
/// kPnNoise for the P_k it uses. Without an explicit alpha, alpha is half the
/// smallest nonzero |P_k| k^{2s+2} over the k in use.
Summary4Report summary4_reality(const PeriodicPotential& q, int s, IndexWindow range,
                                std::optional<double> alpha = std::nullopt);

/// Window-limited evidence for P_n < -alpha n^{-2s-2} for all n > m. The
/// window's top half must lie beyond m.
struct Theorem5Verdict {
  bool holds = false;
  double fitted_alpha = 0.0;
  int fitted_m = 0;
  IndexWindow window;
  std::string note;
};

Theorem5Verdict theorem5_check(const PeriodicPotential& q, int s, IndexWindow window);

/// Window-limited evidence for |g_n| > beta n^{-s-1} and |g_n| > delta |f_n|
/// with delta > 1 over the whole window. fitted_delta is empty when f_n
/// vanishes on the window (delta unbounded).
struct Theorem6Verdict {
  bool holds = false;
  double fitted_beta = 0.0;
  std::optional<double> fitted_delta;
  IndexWindow window;
  std::string note;
};

Theorem6Verdict theorem6_check(const PeriodicPotential& q, int s, IndexWindow window);

/// From the declared jumps: c of Im q and d of Re q (empty when Re q is
/// smooth) at derivative order s.
struct Theorem7Verdict {
  bool holds = false;
  int s = 0;
  double c = 0.0;
  std::optional<double> d;
  /// max over n in {64, 128, 256} of ||g_n| (2 pi n)^{s+1} - |c|| / |c|.
  double decay_consistency = 0.0;
  bool decay_warning = false;  // decay_consistency > 0.2
};

/// Throws JumpDeclarationRequired unless exactly one Im jump is declared and
/// at most one Re jump, at the same derivative order.
Theorem7Verdict theorem7_check(const PeriodicPotential& q);

enum class AlgebraicVerdict { FiniteZone, NotConcluded };

struct CriteriaOptions {
  std::optional<int> s;  // defaults to the potential's declared smoothness
  IndexWindow window;
  bool assert_asymptotic = false;
  std::optional<double> alpha;
};

struct CriteriaReport {
  int s = 0;
  IndexWindow window;
  std::vector<PnRecord> records;  // n = 1 .. 2 window.hi + 1
  double tail_bound = 0.0;
  double max_abs_im_P = 0.0;
  Summary4Report summary4;
  Theorem5Verdict thm5;
  Theorem6Verdict thm6;
  std::optional<Theorem7Verdict> thm7;
  std::string thm7_note;
  AlgebraicVerdict combined = AlgebraicVerdict::NotConcluded;
  std::string combined_reason;
};

/// The combined verdict is FiniteZone when the jump test holds from declared
/// jumps with consistent coefficient decay, or, with assert_asymptotic, when
/// the window evidence for the P_n sign test or the g_n/f_n dominance test
/// holds.
CriteriaReport criteria_report(const PeriodicPotential& q, const CriteriaOptions& options = {});

std::string to_string(AlgebraicVerdict v);

}  // namespace hillzone
