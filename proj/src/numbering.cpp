#include <algorithm>
#include <cmath>

#include "galerkin_internal.hpp"
#include "hillzone/errors.hpp"
#include "hillzone/spectrum.hpp"

namespace hillzone {

namespace {

enum class Zone { Zero, Middle, Pi };

Zone zone_of(double t) {
  if (t < kZoneH) return Zone::Zero;
  if (t > kPi - kZoneH) return Zone::Pi;
  return Zone::Middle;
}

double center(int n, double t) {
  const double c = kTwoPi * n + t;
  return c * c;
}

// The member that continues the upper curve: by real part, or by imaginary
// part when the two are closer to a conjugate pair than to a real split.
bool is_larger(cplx a, cplx b) {
  const double dre = a.real() - b.real();
  const double dim = a.imag() - b.imag();
  if (std::abs(dim) > std::abs(dre)) return dim > 0.0;
  return dre > 0.0;
}

std::vector<std::size_t> within(const std::vector<cplx>& raw, double c, double radius) {
  std::vector<std::size_t> hits;
  for (std::size_t i = 0; i < raw.size(); ++i)
    if (std::abs(raw[i] - c) < radius) hits.push_back(i);
  return hits;
}

// Middle-zone discs have radius 0.2 n: at t >= h the centers of n and -n are
// 0.4 n apart, so the discs are disjoint.
constexpr double kMiddleRadius = 0.2;

int sequence_index(std::size_t p) {
  const int k = static_cast<int>(p);
  return (k % 2 == 1) ? -(k + 1) / 2 : k / 2;
}

}  // namespace

int localization_failure(const std::vector<cplx>& raw, double t, int n_max) {
  const Zone zone = zone_of(t);
  for (int n = n_max; n >= 1; --n) {
    bool ok = true;
    if (zone == Zone::Middle) {
      ok = within(raw, center(n, t), kMiddleRadius * n).size() == 1 &&
           within(raw, center(-n, t), kMiddleRadius * n).size() == 1;
    } else {
      ok = within(raw, center(n, t), n).size() == 2;
    }
    if (!ok) return n;
  }
  return 0;
}

std::map<int, cplx> number_eigenvalues(const std::vector<cplx>& raw, double t, int n_est, int n_max) {
  const Zone zone = zone_of(t);
  std::map<int, cplx> out;
  std::vector<bool> claimed(raw.size(), false);

  auto claim = [&](std::size_t i, int n) {
    if (claimed[i]) throw NumberingAmbiguity(n, t, "eigenvalue already assigned to another index");
    claimed[i] = true;
    out[n] = raw[i];
  };

  for (int n = std::max(n_est, 1); n <= n_max; ++n) {
    if (zone == Zone::Middle) {
      for (int m : {n, -n}) {
        const auto hits = within(raw, center(m, t), kMiddleRadius * n);
        if (hits.size() != 1)
          throw NumberingAmbiguity(m, t, "localization disc holds " + std::to_string(hits.size()) +
                                             " eigenvalues, expected 1");
        claim(hits[0], m);
      }
    } else {
      const auto hits = within(raw, center(n, t), n);
      if (hits.size() != 2)
        throw NumberingAmbiguity(n, t, "localization disc holds " + std::to_string(hits.size()) +
                                           " eigenvalues, expected 2");
      const bool first_larger = is_larger(raw[hits[0]], raw[hits[1]]);
      const std::size_t hi = first_larger ? hits[0] : hits[1];
      const std::size_t lo = first_larger ? hits[1] : hits[0];
      if (zone == Zone::Zero) {
        claim(hi, n);
        claim(lo, -n);
      } else {
        claim(hi, -n - 1);
        claim(lo, n);
      }
    }
  }

  std::vector<cplx> rest;
  for (std::size_t i = 0; i < raw.size(); ++i)
    if (!claimed[i]) rest.push_back(raw[i]);
  std::sort(rest.begin(), rest.end(), [](cplx a, cplx b) { return a.real() < b.real(); });

  const int low = std::max(n_est, 1);
  const std::size_t needed = static_cast<std::size_t>(zone == Zone::Pi ? 2 * low : 2 * low - 1);
  if (rest.size() < needed)
    throw NumberingAmbiguity(low - 1, t, "not enough eigenvalues left for the low indices");
  rest.resize(needed);
  // End zones pair consecutive entries; order each pair by the same rule as
  // the high indices.
  if (zone != Zone::Middle) {
    const std::size_t start = zone == Zone::Zero ? 1 : 0;
    for (std::size_t p = start; p + 1 < rest.size(); p += 2)
      if (is_larger(rest[p], rest[p + 1])) std::swap(rest[p], rest[p + 1]);
  }
  for (std::size_t p = 0; p < rest.size(); ++p) out[sequence_index(p)] = rest[p];
  return out;
}

int estimate_n_est(const PeriodicPotential& q, int K) {
  const detail::GalerkinOperator op(q, K);
  const int n_max = galerkin_index_limit(K);
  const double h = kZoneH;
  const std::vector<double> ts = {0.0,      h / 2,          h,        kPi / 4,          kPi / 2,
                                  3 * kPi / 4, kPi - h, kPi - h / 2, kPi};
  int worst = 0;
  for (double t : ts) worst = std::max(worst, localization_failure(op.eigenvalues(t), t, n_max));
  return worst + 1;
}

}  // namespace hillzone
