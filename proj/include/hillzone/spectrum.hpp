#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hillzone/floquet.hpp"
#include "hillzone/potential.hpp"

namespace hillzone {

/// Half-width of the quasimomentum zones around t = 0 and t = pi in which
/// eigenvalues are numbered in pairs.
inline constexpr double kZoneH = 1.0 / (20.0 * kPi);

struct SpectrumTolerances {
  double tol_real = 1e-7;
  double tol_double = 1e-6;
  double tol_conj = 1e-6;
  double tol_gap = 1e-6;
  double tol_ode = kDefaultTolOde;
  double tol_member = kDefaultTolMember;
  double tol_t = 1e-10;  // bisection resolution in t
};

// ---------------------------------------------------------------------------
// Galerkin discretization of L_t

/// Eigenvalues of the (2K+1) x (2K+1) matrix with diagonal (2 pi k + t)^2 and
/// entries q_{k-m} off the diagonal, k, m = -K..K. Unsorted. Coefficients
/// beyond the bandwidth of a sampled potential are treated as zero.
std::vector<cplx> galerkin_eigenvalues(const PeriodicPotential& q, double t, int K);

/// Real parts above this bound are not trusted (outside the central 2K/3
/// of the truncated spectrum).
double galerkin_trusted_bound(int K);

/// Largest |n| numbered from a Galerkin solve with truncation K.
inline int galerkin_index_limit(int K) { return K / 3; }

/// max over trusted eigenvalues l of min over all eigenvalues m of |conj(l) - m|.
double conjugation_closure(const PeriodicPotential& q, double t, int K);

// ---------------------------------------------------------------------------
// Numbering

/// Index n -> lambda_n(t). Indices |n| >= n_est are assigned by localization
/// around (2 pi n + t)^2: singly for t in [h, pi - h], in pairs {n, -n} for
/// t < h and {n, -n-1} for t > pi - h. Lower indices follow ascending real
/// part in the order 0, -1, 1, -2, 2, ... Within a pair the larger member
/// (by real part, or by imaginary part for a nearly conjugate pair) gets
/// index n at t = 0 and index -n-1 at t = pi.
/// Throws NumberingAmbiguity when a localization disc does not hold the
/// expected count.
std::map<int, cplx> number_eigenvalues(const std::vector<cplx>& raw, double t, int n_est, int n_max);

/// Largest index n that fails the localization checks at t, or 0 if none
/// does. Used to estimate the threshold index.
int localization_failure(const std::vector<cplx>& raw, double t, int n_max);

/// Smallest n0 >= 1 such that every n in [n0, n_max] passes the
/// localization checks on a fixed test grid of quasimomenta. Returns
/// n_max + 1 when even n_max fails.
int estimate_n_est(const PeriodicPotential& q, int K);

// ---------------------------------------------------------------------------
// Bands

struct BlochEigenvalue {
  int n = 0;
  double t = 0.0;
  cplx lambda;
};

enum class IntervalKind { Empty, Point, Interval };

struct RealInterval {
  IntervalKind kind = IntervalKind::Empty;
  double A = 0.0;
  double B = 0.0;
};

struct BandCurve {
  int n = 0;
  std::vector<BlochEigenvalue> samples;
  cplx endpoint_0;
  cplx endpoint_pi;
  RealInterval real_interval;
  std::optional<double> a_n;
  std::optional<double> b_n;
  std::optional<double> epsilon_n;  // collision point near t = 0
  std::optional<double> delta_n;    // collision point near t = pi
  /// Half the splitting of the colliding pair at the real side of the
  /// bisection bracket; the interval endpoint there is the pair mean.
  double coalescence_defect = 0.0;
  /// Largest |step| between consecutive samples divided by the median
  /// step; values far above 1 point at a numbering swap.
  double continuity_ratio = 0.0;
  bool high_index = false;  // |n| >= n_est
};

struct BandOptions {
  int K = 64;
  int grid_size = 128;
  SpectrumTolerances tol;
};

struct BandSet {
  int n_est = 1;
  int K = 64;
  std::vector<double> t_grid;
  std::map<int, BandCurve> bands;
};

/// Traces Gamma_n for every requested index from one shared sweep over a
/// uniform t-grid on [0, pi]. Grid solves run in parallel.
BandSet trace_bands(const PeriodicPotential& q, const std::vector<int>& indices,
                    const BandOptions& options = {});

BandCurve trace_band(const PeriodicPotential& q, int n, int grid_size = 128, int K = 64,
                     const SpectrumTolerances& tol = {});

// ---------------------------------------------------------------------------
// Two-periodic eigenvalues

enum class Boundary { Periodic, Antiperiodic };
enum class Classification { SR, Double, Nonreal };

struct TwoPeriodicEigenvalue {
  int n = 0;
  Boundary boundary = Boundary::Periodic;
  cplx lambda;
  int multiplicity = 1;
  Classification classification = Classification::SR;
};

/// Double if the cluster pair coincides within tol_double, Nonreal if
/// |Im lambda| > tol_real, SR otherwise. A cluster is the pair localized
/// around one center ({n, -n} at t = 0, {n, -n-1} at t = pi); the lowest
/// periodic eigenvalue forms a cluster of one.
Classification classify(const TwoPeriodicEigenvalue& e, const std::vector<TwoPeriodicEigenvalue>& cluster,
                        const SpectrumTolerances& tol = {});

struct RootOptions {
  SpectrumTolerances tol;
  int cross_check_K = 64;
  double cross_check_radius = 500.0;  // compare with Galerkin for |lambda| below this
};

struct RootReport {
  std::vector<TwoPeriodicEigenvalue> eigenvalues;  // periodic then antiperiodic, by index order
  double galerkin_discrepancy = 0.0;               // max over compared eigenvalues
  int galerkin_compared = 0;
  int contour_retries = 0;
  int evaluations = 0;
};

/// All roots of F = 2 and F = -2 with Re lambda in [floor, lambda_max] and
/// |Im lambda| within the numerical range of q, by argument-principle
/// counting on tiles between consecutive free centers (pi m)^2, followed by
/// Newton polishing. Near-coincident pairs are resolved from a local
/// quadratic model around the critical point.
RootReport two_periodic_roots(const PeriodicPotential& q, double lambda_max, const RootOptions& options = {});

/// Zeros of g inside a rectangle, counted with multiplicity. Exposed for
/// tests. Throws ContourFailure when the boundary cannot be kept away from
/// zeros.
int count_zeros(const std::function<cplx(cplx)>& g, cplx lower_left, cplx upper_right, int* evaluations = nullptr);

// ---------------------------------------------------------------------------
// Gaps and the spectral verdict

enum class Verdict { FiniteZone, InfiniteZone, Undetermined };

struct Gap {
  double left = 0.0;
  double right = 0.0;
  int lower_band = 0;  // band whose real interval ends at `left`
  int upper_band = 0;  // band whose real interval starts at `right`
};

struct ClusterReport {
  int n = 0;  // cluster {n, -n} at t = 0 or {n, -n-1} at t = pi
  Boundary boundary = Boundary::Periodic;
  cplx lower;
  cplx upper;
  Classification classification = Classification::SR;
  bool high_index = false;
};

struct GapReport {
  int horizon_N = 0;
  int n_est = 1;
  int K = 64;
  std::vector<std::pair<int, RealInterval>> intervals;  // by band index order
  std::vector<Gap> gaps;
  std::vector<ClusterReport> clusters;
  bool ordering_holds = true;  // A_{-n} < B_{-n} <= A_n < B_n <= A_{-n-1} over the high indices
  std::string ordering_detail;
  Verdict verdict = Verdict::Undetermined;
  std::string reason;
  double max_coalescence_defect = 0.0;
};

struct GapOptions {
  int K = 64;
  int grid_size = 128;
  SpectrumTolerances tol;
};

GapReport gaps(const PeriodicPotential& q, int N_horizon, const GapOptions& options = {});

/// InfiniteZone when an SR cluster lies in the top third of [n_est, horizon];
/// FiniteZone when that top third is all Nonreal, or when no cluster up to
/// the horizon is SR; Undetermined otherwise (SR clusters that give way to
/// coincidences below tol_double) and when n_est > horizon. Exposed so the
/// rule can be tested on synthetic data.
std::pair<Verdict, std::string> spectral_verdict(const std::vector<ClusterReport>& clusters, int n_est,
                                                 int horizon);

std::string to_string(Verdict v);
std::string to_string(Classification c);
std::string to_string(Boundary b);

}  // namespace hillzone
