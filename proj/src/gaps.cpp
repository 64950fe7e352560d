#include <algorithm>
#include <cmath>
#include <sstream>

#include "hillzone/errors.hpp"
#include "hillzone/spectrum.hpp"

namespace hillzone {

namespace {

ClusterReport make_cluster(int n, Boundary boundary, cplx a, std::optional<cplx> b, int n_est,
                           const SpectrumTolerances& tol) {
  ClusterReport c;
  c.n = n;
  c.boundary = boundary;
  c.high_index = n >= n_est;
  TwoPeriodicEigenvalue ea{n, boundary, a, 1, Classification::SR};
  std::vector<TwoPeriodicEigenvalue> members = {ea};
  if (b) members.push_back({boundary == Boundary::Periodic ? -n : -n - 1, boundary, *b, 1, Classification::SR});
  // Report the most severe member: Nonreal over SR when one of a split pair
  // leaves the axis.
  c.classification = classify(ea, members, tol);
  if (b && c.classification == Classification::SR)
    c.classification = classify(members[1], members, tol);
  c.lower = a;
  c.upper = b.value_or(a);
  if (c.lower.real() > c.upper.real()) std::swap(c.lower, c.upper);
  return c;
}

}  // namespace

std::pair<Verdict, std::string> spectral_verdict(const std::vector<ClusterReport>& clusters, int n_est,
                                                 int horizon) {
  if (n_est > horizon)
    return {Verdict::Undetermined, "no index up to the horizon " + std::to_string(horizon) +
                                       " lies in the localized regime (threshold index " +
                                       std::to_string(n_est) + ")"};
  const int span = horizon - n_est + 1;
  const int top_from = horizon - std::max(1, (span + 2) / 3) + 1;

  int last_sr = -1;
  bool top_sr = false;
  bool top_all_nonreal = true;
  for (const auto& c : clusters) {
    // The lowest periodic eigenvalue is alone and bounds no gap.
    if (c.n > horizon || (c.n == 0 && c.boundary == Boundary::Periodic)) continue;
    const bool sr = c.classification == Classification::SR;
    // Open gaps below n_est cannot decide the verdict, but they do rule out
    // reading later coincidences as closed gaps.
    if (sr) last_sr = std::max(last_sr, c.n);
    if (c.n < n_est) continue;
    if (c.n >= top_from) {
      top_sr = top_sr || sr;
      top_all_nonreal = top_all_nonreal && c.classification == Classification::Nonreal;
    }
  }
  std::ostringstream why;
  if (top_sr) {
    why << "SR 2-periodic eigenvalues persist up to n=" << last_sr << " in the top third [" << top_from << ", "
        << horizon << "]";
    return {Verdict::InfiniteZone, why.str()};
  }
  if (top_all_nonreal) {
    why << "all 2-periodic clusters in [" << top_from << ", " << horizon << "] are nonreal";
    return {Verdict::FiniteZone, why.str()};
  }
  if (last_sr < 0) {
    why << "no SR 2-periodic eigenvalue up to n=" << horizon;
    return {Verdict::FiniteZone, why.str()};
  }
  why << "SR eigenvalues up to n=" << last_sr << ", then pairs coincide within tol_double in [" << top_from
      << ", " << horizon << "]; exact coexistence cannot be told apart from gaps below resolution";
  return {Verdict::Undetermined, why.str()};
}

GapReport gaps(const PeriodicPotential& q, int N_horizon, const GapOptions& options) {
  if (N_horizon < 0) throw NumericsError("horizon must be non-negative");
  std::vector<int> indices;
  for (int k = -N_horizon - 1; k <= N_horizon; ++k) indices.push_back(k);
  const BandSet set = trace_bands(q, indices, BandOptions{options.K, options.grid_size, options.tol});

  GapReport report;
  report.horizon_N = N_horizon;
  report.n_est = set.n_est;
  report.K = set.K;
  // Band order along the real axis: 0, -1, 1, -2, 2, ...
  std::vector<int> order = {0};
  for (int n = 1; n <= N_horizon + 1; ++n) {
    order.push_back(-n);
    if (n <= N_horizon) order.push_back(n);
  }
  for (int k : order) {
    const auto& band = set.bands.at(k);
    report.intervals.emplace_back(k, band.real_interval);
    report.max_coalescence_defect = std::max(report.max_coalescence_defect, band.coalescence_defect);
  }

  // Gaps: complement of the union of the real intervals, up to the last band.
  std::vector<std::pair<int, RealInterval>> present;
  for (const auto& [k, iv] : report.intervals)
    if (iv.kind != IntervalKind::Empty) present.emplace_back(k, iv);
  std::sort(present.begin(), present.end(), [](const auto& a, const auto& b) {
    return std::min(a.second.A, a.second.B) < std::min(b.second.A, b.second.B);
  });
  if (!present.empty()) {
    double reach = std::max(present[0].second.A, present[0].second.B);
    int reach_band = present[0].first;
    for (std::size_t i = 1; i < present.size(); ++i) {
      const double lo = std::min(present[i].second.A, present[i].second.B);
      const double hi = std::max(present[i].second.A, present[i].second.B);
      if (lo - reach > options.tol.tol_gap) report.gaps.push_back({reach, lo, reach_band, present[i].first});
      if (hi > reach) {
        reach = hi;
        reach_band = present[i].first;
      }
    }
  }

  // Ordering A_{-n} < B_{-n} <= A_n < B_n <= A_{-n-1} < B_{-n-1}.
  std::ostringstream detail;
  const double slack = options.tol.tol_gap;
  for (int n = std::max(set.n_est, 1); n <= N_horizon; ++n) {
    const auto& m = set.bands.at(-n).real_interval;
    const auto& p = set.bands.at(n).real_interval;
    const auto& next = set.bands.at(-n - 1).real_interval;
    const bool ok = m.A < m.B && m.B <= p.A + slack && p.A < p.B && p.B <= next.A + slack && next.A < next.B;
    if (!ok) {
      report.ordering_holds = false;
      detail << "n=" << n << " ";
    }
  }
  report.ordering_detail = report.ordering_holds ? "" : "ordering fails at " + detail.str();

  const auto& tol = options.tol;
  for (int n = 0; n <= N_horizon; ++n) {
    const auto& bn = set.bands.at(n);
    if (n == 0) {
      report.clusters.push_back(make_cluster(0, Boundary::Periodic, bn.endpoint_0, std::nullopt, set.n_est, tol));
    } else {
      report.clusters.push_back(
          make_cluster(n, Boundary::Periodic, bn.endpoint_0, set.bands.at(-n).endpoint_0, set.n_est, tol));
    }
    report.clusters.push_back(
        make_cluster(n, Boundary::Antiperiodic, bn.endpoint_pi, set.bands.at(-n - 1).endpoint_pi, set.n_est, tol));
  }

  std::tie(report.verdict, report.reason) = spectral_verdict(report.clusters, set.n_est, N_horizon);
  return report;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::FiniteZone: return "FiniteZone";
    case Verdict::InfiniteZone: return "InfiniteZone";
    default: return "Undetermined";
  }
}

std::string to_string(Classification c) {
  switch (c) {
    case Classification::SR: return "SR";
    case Classification::Double: return "Double";
    default: return "Nonreal";
  }
}

std::string to_string(Boundary b) { return b == Boundary::Periodic ? "periodic" : "antiperiodic"; }

}  // namespace hillzone
