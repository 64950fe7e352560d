#include <algorithm>
#include <cmath>
#include <limits>

#include "galerkin_internal.hpp"
#include "hillzone/errors.hpp"
#include "hillzone/parallel.hpp"
#include "hillzone/spectrum.hpp"

namespace hillzone {

namespace {

using Numbered = std::map<int, cplx>;

struct Sweep {
  const detail::GalerkinOperator& op;
  int n_est;
  int n_max;
  double tol_real;

  Numbered at(double t) const { return number_eigenvalues(op.eigenvalues(t), t, n_est, n_max); }
  bool real(const Numbered& m, int k) const { return std::abs(m.at(k).imag()) <= tol_real; }
};

struct Edge {
  double t = 0.0;     // real side of the final bracket
  Numbered spectrum;  // numbered spectrum at t
};

// Shrinks [t_a, t_b] (reality differs at the two ends) to width tol_t and
// returns the end where band k is real.
Edge bisect(const Sweep& sweep, int k, double t_a, Numbered s_a, double t_b, Numbered s_b, double tol_t) {
  bool real_a = sweep.real(s_a, k);
  if (real_a == sweep.real(s_b, k)) throw CoalescenceNotFound(k);
  for (int iter = 0; iter < 200 && t_b - t_a > tol_t; ++iter) {
    const double mid = 0.5 * (t_a + t_b);
    auto s_mid = sweep.at(mid);
    if (sweep.real(s_mid, k) == real_a) {
      t_a = mid;
      s_a = std::move(s_mid);
    } else {
      t_b = mid;
      s_b = std::move(s_mid);
    }
  }
  if (t_b - t_a > tol_t) throw CoalescenceNotFound(k);
  return real_a ? Edge{t_a, std::move(s_a)} : Edge{t_b, std::move(s_b)};
}

// A pair colliding onto the real axis: the endpoint value shared by both
// bands is the pair mean, which is smooth in t, rather than either member,
// which moves like sqrt(t - t*) next to the collision.
struct Collision {
  double t = 0.0;
  double value = 0.0;
  double defect = 0.0;
};

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2), v.end());
  return v[v.size() / 2];
}

}  // namespace

BandSet trace_bands(const PeriodicPotential& q, const std::vector<int>& indices, const BandOptions& options) {
  if (options.grid_size < 64) throw NumericsError("grid_size must be at least 64");
  const detail::GalerkinOperator op(q, options.K);
  const int n_max = galerkin_index_limit(options.K);
  for (int k : indices)
    if (std::abs(k) > n_max)
      throw NumericsError("band index " + std::to_string(k) + " exceeds the resolvable limit " +
                          std::to_string(n_max) + " for K=" + std::to_string(options.K));

  BandSet set;
  set.K = options.K;
  const int grid = options.grid_size;
  set.t_grid.resize(static_cast<std::size_t>(grid));
  for (int j = 0; j < grid; ++j) set.t_grid[static_cast<std::size_t>(j)] = kPi * j / (grid - 1);

  const auto raw = parallel_map<std::vector<cplx>>(
      set.t_grid.size(), [&](std::size_t j) { return op.eigenvalues(set.t_grid[j]); });

  int worst = estimate_n_est(q, options.K) - 1;
  for (std::size_t j = 0; j < raw.size(); ++j)
    worst = std::max(worst, localization_failure(raw[j], set.t_grid[j], n_max));
  set.n_est = worst + 1;

  const Sweep sweep{op, set.n_est, n_max, options.tol.tol_real};
  std::vector<Numbered> numbered(raw.size());
  for (std::size_t j = 0; j < raw.size(); ++j)
    numbered[j] = number_eigenvalues(raw[j], set.t_grid[j], set.n_est, n_max);

  std::map<std::pair<int, int>, Collision> collisions;  // (side, smaller |index| of pair)
  const double tol_t = options.tol.tol_t;

  // Reality boundary of band k nearest the given end (side 0: t = 0, side
  // 1: t = pi), when the band is nonreal at that end.
  auto find_boundary = [&](int k, int side) -> std::optional<Edge> {
    const std::size_t n = numbered.size();
    if (side == 0) {
      if (sweep.real(numbered[0], k)) return std::nullopt;
      for (std::size_t j = 1; j < n; ++j)
        if (sweep.real(numbered[j], k))
          return bisect(sweep, k, set.t_grid[j - 1], numbered[j - 1], set.t_grid[j], numbered[j], tol_t);
    } else {
      if (sweep.real(numbered[n - 1], k)) return std::nullopt;
      for (std::size_t j = n - 1; j-- > 0;)
        if (sweep.real(numbered[j], k))
          return bisect(sweep, k, set.t_grid[j], numbered[j], set.t_grid[j + 1], numbered[j + 1], tol_t);
    }
    return std::nullopt;
  };

  auto collision = [&](int k, int side) -> std::optional<Collision> {
    const int partner = side == 0 ? -k : -k - 1;
    const std::pair<int, int> key{side, std::min(std::abs(k), std::abs(partner))};
    if (auto it = collisions.find(key); it != collisions.end()) return it->second;
    auto b = find_boundary(k, side);
    if (!b) return std::nullopt;
    const cplx mine = b->spectrum.at(k);
    const auto found = b->spectrum.find(partner);
    const cplx other = found == b->spectrum.end() ? mine : found->second;
    Collision c{b->t, 0.5 * (mine.real() + other.real()), 0.5 * std::abs(mine - other)};
    collisions[key] = c;
    return c;
  };

  auto any_real = [&](int k) {
    return std::any_of(numbered.begin(), numbered.end(), [&](const Numbered& m) { return sweep.real(m, k); });
  };

  for (int k : indices) {
    BandCurve band;
    band.n = k;
    band.high_index = std::abs(k) >= set.n_est;
    for (std::size_t j = 0; j < numbered.size(); ++j)
      band.samples.push_back({k, set.t_grid[j], numbered[j].at(k)});
    band.endpoint_0 = band.samples.front().lambda;
    band.endpoint_pi = band.samples.back().lambda;

    std::vector<double> steps;
    for (std::size_t j = 1; j < band.samples.size(); ++j)
      steps.push_back(std::abs(band.samples[j].lambda - band.samples[j - 1].lambda));
    const double med = median(steps);
    const double largest = steps.empty() ? 0.0 : *std::max_element(steps.begin(), steps.end());
    band.continuity_ratio = med > 0.0 ? largest / med : 0.0;

    if (!any_real(k)) {
      band.real_interval = {};
      set.bands[k] = std::move(band);
      continue;
    }

    if (band.high_index) {
      double t_lo = 0.0, t_hi = kPi;
      double v_lo = band.endpoint_0.real(), v_hi = band.endpoint_pi.real();
      if (auto c = collision(k, 0)) {
        t_lo = c->t;
        v_lo = c->value;
        band.epsilon_n = c->t;
        band.coalescence_defect = std::max(band.coalescence_defect, c->defect);
      }
      if (auto c = collision(k, 1)) {
        t_hi = c->t;
        v_hi = c->value;
        band.delta_n = c->t;
        band.coalescence_defect = std::max(band.coalescence_defect, c->defect);
      }
      // lambda_n increases along t for n > 0 and decreases for n < 0.
      double A = v_lo, B = v_hi;
      if (k > 0) {
        band.a_n = t_lo;
        band.b_n = t_hi;
      } else {
        band.b_n = t_lo;
        band.a_n = t_hi;
        std::swap(A, B);
      }
      band.real_interval = {A == B ? IntervalKind::Point : IntervalKind::Interval, A, B};
    } else {
      // Low index: the real set of the curve is connected, so its extent is
      // the range over real samples plus the refined transition points.
      double lo = std::numeric_limits<double>::infinity();
      double hi = -lo;
      auto include = [&](double v) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      };
      for (std::size_t j = 0; j < numbered.size(); ++j) {
        if (sweep.real(numbered[j], k)) include(numbered[j].at(k).real());
        if (j + 1 < numbered.size() && sweep.real(numbered[j], k) != sweep.real(numbered[j + 1], k)) {
          const auto b = bisect(sweep, k, set.t_grid[j], numbered[j], set.t_grid[j + 1], numbered[j + 1], tol_t);
          const cplx mine = b.spectrum.at(k);
          // The transition is a collision with the nearest other eigenvalue;
          // use the pair mean as for the high indices.
          auto found = b.spectrum.end();
          double nearest = std::numeric_limits<double>::infinity();
          for (auto it = b.spectrum.begin(); it != b.spectrum.end(); ++it) {
            if (it->first == k || std::abs(it->second - mine) >= nearest) continue;
            nearest = std::abs(it->second - mine);
            found = it;
          }
          if (found != b.spectrum.end()) {
            include(0.5 * (mine.real() + found->second.real()));
            band.coalescence_defect = std::max(band.coalescence_defect, 0.5 * std::abs(mine - found->second));
          } else {
            include(mine.real());
          }
        }
      }
      band.real_interval = {lo == hi ? IntervalKind::Point : IntervalKind::Interval, lo, hi};
    }
    set.bands[k] = std::move(band);
  }
  return set;
}

BandCurve trace_band(const PeriodicPotential& q, int n, int grid_size, int K, const SpectrumTolerances& tol) {
  BandOptions options{K, grid_size, tol};
  auto set = trace_bands(q, {n}, options);
  return set.bands.at(n);
}

}  // namespace hillzone
