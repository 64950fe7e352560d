#include <algorithm>
#include <array>
#include <cmath>
#include <map>

#include "galerkin_internal.hpp"
#include "hillzone/errors.hpp"
#include "hillzone/spectrum.hpp"

namespace hillzone {

namespace {

struct NearZero {};

class Phase {
 public:
  explicit Phase(const std::function<cplx(cplx)>& g) : g_(g) {}

  cplx operator()(cplx z) {
    const auto key = std::make_pair(z.real(), z.imag());
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    ++evaluations;
    const cplx v = g_(z);
    memo_.emplace(key, v);
    return v;
  }

  // Accumulated change of arg g along the segment [a, b].
  double along(cplx a, cplx b, int pieces) {
    double total = 0.0;
    cplx za = a;
    cplx ga = (*this)(a);
    for (int i = 1; i <= pieces; ++i) {
      const cplx zb = i == pieces ? b : a + (b - a) * (static_cast<double>(i) / pieces);
      const cplx gb = (*this)(zb);
      total += refine(za, zb, ga, gb, 0);
      za = zb;
      ga = gb;
    }
    return total;
  }

  int evaluations = 0;

 private:
  double refine(cplx za, cplx zb, cplx ga, cplx gb, int depth) {
    if (ga == cplx{} || gb == cplx{}) throw NearZero{};
    const double d = std::arg(gb / ga);
    const double ratio = std::abs(gb) / std::abs(ga);
    if (std::abs(d) < kPi / 4 && ratio < 4.0 && ratio > 0.25) return d;
    if (depth > 48 || std::abs(zb - za) < 1e-13 * std::max(1.0, std::abs(za))) throw NearZero{};
    const cplx zm = 0.5 * (za + zb);
    const cplx gm = (*this)(zm);
    return refine(za, zm, ga, gm, depth + 1) + refine(zm, zb, gm, gb, depth + 1);
  }

  const std::function<cplx(cplx)>& g_;
  std::map<std::pair<double, double>, cplx> memo_;
};

// g depends on lambda through sqrt(lambda) and oscillates on the scale
// |d sqrt(lambda)| ~ 1; sample horizontal edges at steps of 1/4 in
// sqrt(lambda) so no full turn of the phase fits between two samples.
int horizontal_pieces(double a, double b) {
  const double sa = std::sqrt(std::max(std::min(a, b), 0.0));
  const double sb = std::sqrt(std::max(std::max(a, b), 0.0));
  const double below = std::min(a, b) < 0.0 ? std::sqrt(-std::min(a, b)) : 0.0;
  return 8 + static_cast<int>(std::ceil(4.0 * (sb - sa + below)));
}

int winding(Phase& phase, cplx ll, cplx ur) {
  const cplx lr{ur.real(), ll.imag()};
  const cplx ul{ll.real(), ur.imag()};
  const int pieces = horizontal_pieces(ll.real(), ur.real());
  const double total = phase.along(ll, lr, pieces) + phase.along(lr, ur, 4) + phase.along(ur, ul, pieces) +
                       phase.along(ul, ll, 4);
  const double turns = total / kTwoPi;
  const double rounded = std::round(turns);
  if (std::abs(turns - rounded) > 0.2 || rounded < 0) throw NearZero{};
  return static_cast<int>(rounded);
}

double scale_at(cplx z) { return std::max(1.0, std::sqrt(std::abs(z))); }

// Taylor coefficients a_0..a_{M-1} of g at c from M samples on a circle of
// radius r (trapezoidal rule for the Cauchy integrals).
constexpr int kCircle = 8;
std::array<cplx, kCircle> taylor(Phase& g, cplx c, double r) {
  std::array<cplx, kCircle> samples{};
  for (int j = 0; j < kCircle; ++j) samples[static_cast<std::size_t>(j)] = g(c + std::polar(r, kTwoPi * j / kCircle));
  std::array<cplx, kCircle> a{};
  for (int k = 0; k < kCircle; ++k) {
    cplx acc{};
    for (int j = 0; j < kCircle; ++j)
      acc += samples[static_cast<std::size_t>(j)] * std::polar(1.0, -kTwoPi * j * k / kCircle);
    a[static_cast<std::size_t>(k)] = acc / (static_cast<double>(kCircle) * std::pow(r, k));
  }
  return a;
}

// Polynomial p(z) = sum a_k z^k and its derivative, degree limited to deg.
std::pair<cplx, cplx> poly_eval(const std::array<cplx, kCircle>& a, int deg, cplx z) {
  cplx p{}, dp{};
  for (int k = deg; k >= 0; --k) {
    dp = dp * z + p;
    p = p * z + a[static_cast<std::size_t>(k)];
  }
  return {p, dp};
}

cplx poly_root(const std::array<cplx, kCircle>& a, int deg, cplx z) {
  for (int it = 0; it < 60; ++it) {
    const auto [p, dp] = poly_eval(a, deg, z);
    if (dp == cplx{}) break;
    const cplx step = p / dp;
    z -= step;
    if (std::abs(step) <= 1e-16 * std::max(1.0, std::abs(z))) break;
  }
  return z;
}

// Damped Newton on g with a central-difference derivative.
std::optional<cplx> newton(Phase& g, cplx z, double scale) {
  const double delta = 1e-6 * scale;
  cplx gz = g(z);
  for (int it = 0; it < 60; ++it) {
    const cplx d = (g(z + delta) - g(z - delta)) / (2.0 * delta);
    if (d == cplx{}) return std::nullopt;
    cplx step = gz / d;
    cplx next = z - step;
    cplx gn = g(next);
    for (int halve = 0; halve < 20 && std::abs(gn) > 1.5 * std::abs(gz); ++halve) {
      step *= 0.5;
      next = z - step;
      gn = g(next);
    }
    z = next;
    gz = gn;
    if (std::abs(step) <= 1e-13 * std::max(1.0, std::abs(z))) return z;
  }
  return std::abs(gz) < 1e-8 ? std::optional<cplx>(z) : std::nullopt;
}

// Two roots near `hint`: walk to the critical point of g, where the local
// model is a0 + a2 z^2 + ..., shrinking the sampling circle with the
// estimated separation so the model stays well conditioned.
std::optional<std::array<cplx, 2>> cluster_pair(Phase& g, cplx hint, double tile_width) {
  const double scale = scale_at(hint);
  double r = std::min(0.05 * scale, 0.1 * tile_width);
  const double r_min = 1e-6 * scale;
  cplx c = hint;
  std::array<cplx, kCircle> a{};
  for (int it = 0; it < 24; ++it) {
    a = taylor(g, c, r);
    if (a[2] == cplx{}) return std::nullopt;
    // Critical point of the local polynomial.
    std::array<cplx, kCircle> da{};
    for (int k = 1; k < kCircle; ++k) da[static_cast<std::size_t>(k - 1)] = static_cast<double>(k) * a[static_cast<std::size_t>(k)];
    const cplx zc = poly_root(da, 4, -a[1] / (2.0 * a[2]));
    if (std::abs(zc) > 0.5 * tile_width) return std::nullopt;
    c += zc;
    const double separation = std::abs(std::sqrt(a[1] * a[1] - 4.0 * a[0] * a[2]) / a[2]);
    const double r_next = std::clamp(2.0 * separation, r_min, r);
    const bool settled = std::abs(zc) <= 1e-14 * std::max(1.0, std::abs(c)) + 1e-3 * r && r_next == r;
    r = r_next;
    if (settled) break;
  }
  a = taylor(g, c, r);
  const cplx disc = std::sqrt(a[1] * a[1] - 4.0 * a[0] * a[2]);
  std::array<cplx, 2> z = {(-a[1] + disc) / (2.0 * a[2]), (-a[1] - disc) / (2.0 * a[2])};
  for (auto& zi : z) zi = c + poly_root(a, 4, zi);
  if (std::abs(z[0] - z[1]) > 1e-4 * scale) {
    auto p0 = newton(g, z[0], scale);
    auto p1 = newton(g, z[1], scale);
    if (p0 && p1 && std::abs(*p0 - *p1) > 1e-8 * scale) z = {*p0, *p1};
  }
  return z;
}

struct Tile {
  double left;
  double right;
  double height;
  cplx hint;
};

bool inside(const Tile& t, cplx z) {
  const double slack = 1e-9 * scale_at(z);
  return z.real() >= t.left - slack && z.real() <= t.right + slack && std::abs(z.imag()) <= t.height;
}

// Roots in the tile; subdivides when the direct methods fail.
void solve_tile(Phase& g, const Tile& tile, int count, int depth, std::vector<cplx>& out) {
  if (count == 0) return;
  const double width = tile.right - tile.left;
  if (count == 1) {
    for (cplx start : {tile.hint, cplx{0.5 * (tile.left + tile.right), 0.0}}) {
      auto z = newton(g, start, scale_at(start));
      if (z && inside(tile, *z)) {
        out.push_back(*z);
        return;
      }
    }
  } else if (count == 2) {
    if (auto pair = cluster_pair(g, tile.hint, width)) {
      if (inside(tile, (*pair)[0]) && inside(tile, (*pair)[1])) {
        out.push_back((*pair)[0]);
        out.push_back((*pair)[1]);
        return;
      }
    }
  }
  if (depth > 12) throw ContourFailure("could not isolate roots in [" + std::to_string(tile.left) + ", " +
                                       std::to_string(tile.right) + "]");
  // Split at a slightly off-center cut so repeated splits do not land on
  // the same abscissa.
  for (int attempt = 0; attempt < 5; ++attempt) {
    const double cut = tile.left + width * (0.5 + 0.0371 * (attempt + 1) * (attempt % 2 ? -1 : 1));
    try {
      const Tile lower{tile.left, cut, tile.height, cplx{0.5 * (tile.left + cut), 0.0}};
      const Tile upper{cut, tile.right, tile.height, cplx{0.5 * (cut + tile.right), 0.0}};
      const int n_lower = winding(g, {lower.left, -lower.height}, {lower.right, lower.height});
      const int n_upper = winding(g, {upper.left, -upper.height}, {upper.right, upper.height});
      if (n_lower + n_upper != count) continue;
      solve_tile(g, lower, n_lower, depth + 1, out);
      solve_tile(g, upper, n_upper, depth + 1, out);
      return;
    } catch (const NearZero&) {
      continue;
    }
  }
  throw ContourFailure("subdivision of [" + std::to_string(tile.left) + ", " + std::to_string(tile.right) +
                       "] kept meeting roots on the cut");
}

bool is_larger(cplx a, cplx b) {
  const double dre = a.real() - b.real();
  const double dim = a.imag() - b.imag();
  if (std::abs(dim) > std::abs(dre)) return dim > 0.0;
  return dre > 0.0;
}

int sequence_index(std::size_t p) {
  const int k = static_cast<int>(p);
  return (k % 2 == 1) ? -(k + 1) / 2 : k / 2;
}

}  // namespace

int count_zeros(const std::function<cplx(cplx)>& g, cplx lower_left, cplx upper_right, int* evaluations) {
  Phase phase(g);
  try {
    const int n = winding(phase, lower_left, upper_right);
    if (evaluations) *evaluations += phase.evaluations;
    return n;
  } catch (const NearZero&) {
    throw ContourFailure("contour passes too close to a zero");
  }
}

Classification classify(const TwoPeriodicEigenvalue& e, const std::vector<TwoPeriodicEigenvalue>& cluster,
                        const SpectrumTolerances& tol) {
  const bool lone_ground = cluster.size() == 1 && e.boundary == Boundary::Periodic && e.n == 0;
  if (cluster.size() != 2 && !lone_ground)
    throw NumberingAmbiguity(e.n, e.boundary == Boundary::Periodic ? 0.0 : kPi,
                             "cluster holds " + std::to_string(cluster.size()) + " eigenvalues, expected 2");
  if (cluster.size() == 2 && std::abs(cluster[0].lambda - cluster[1].lambda) <= tol.tol_double)
    return Classification::Double;
  if (std::abs(e.lambda.imag()) > tol.tol_real) return Classification::Nonreal;
  return Classification::SR;
}

RootReport two_periodic_roots(const PeriodicPotential& q, double lambda_max, const RootOptions& options) {
  const auto bounds = q.bounds();
  const double floor = bounds.min_re - 1.0;
  const double im_cap = bounds.max_abs_im + 1.0;
  const double tol_ode = options.tol.tol_ode;
  RootReport report;

  for (const Boundary family : {Boundary::Periodic, Boundary::Antiperiodic}) {
    const int sign = family == Boundary::Periodic ? +1 : -1;
    const std::function<cplx(cplx)> g = [&](cplx z) { return monodromy(q, z, tol_ode).characteristic(sign); };
    Phase phase(g);
    std::vector<cplx> roots;

    // Free centers (pi m)^2 with m even (periodic) or odd (antiperiodic).
    int m = family == Boundary::Periodic ? 0 : 1;
    double left = floor;
    while (left < lambda_max) {
      const double c = (kPi * m) * (kPi * m);
      const double c_next = (kPi * (m + 2)) * (kPi * (m + 2));
      double right = std::max(0.5 * (c + c_next), left + 1.0);
      // Keep the horizontal edges about 1/4 away from the roots in
      // sqrt(lambda), where the phase of g varies slowly.
      double height = std::max(im_cap, 0.5 * std::sqrt(std::max(right, 1.0)));
      int count = -1;
      for (int attempt = 0; attempt <= 5; ++attempt) {
        try {
          count = winding(phase, {left, -height}, {right, height});
          break;
        } catch (const NearZero&) {
          if (attempt == 5)
            throw ContourFailure("tile [" + std::to_string(left) + ", " + std::to_string(right) +
                                 "] could not be separated from the roots after 5 perturbations");
          ++report.contour_retries;
          right += 1e-3 * (right - left) * (attempt + 1);
          height *= 1.0 + 0.07 * (attempt + 1);
        }
      }
      const Tile tile{left, right, height, cplx{std::max(c, left), 0.0}};
      solve_tile(phase, tile, count, 0, roots);
      left = right;
      m += 2;
    }
    report.evaluations += phase.evaluations;

    std::sort(roots.begin(), roots.end(), [](cplx a, cplx b) { return a.real() < b.real(); });
    // Clusters: periodic {0}, {1, 2}, {3, 4}, ...; antiperiodic {0, 1}, {2, 3}, ...
    const std::size_t start = family == Boundary::Periodic ? 1 : 0;
    for (std::size_t p = start; p + 1 < roots.size(); p += 2)
      if (is_larger(roots[p], roots[p + 1])) std::swap(roots[p], roots[p + 1]);

    std::vector<TwoPeriodicEigenvalue> fam;
    for (std::size_t p = 0; p < roots.size(); ++p)
      fam.push_back({sequence_index(p), family, roots[p], 1, Classification::SR});
    for (std::size_t p = 0; p < fam.size(); ++p) {
      std::vector<TwoPeriodicEigenvalue> cluster;
      if (family == Boundary::Periodic && p == 0) {
        cluster = {fam[0]};
      } else {
        const std::size_t first = (p - start) / 2 * 2 + start;
        for (std::size_t i = first; i < std::min(first + 2, fam.size()); ++i) cluster.push_back(fam[i]);
      }
      if (cluster.size() == 1 && !(family == Boundary::Periodic && p == 0)) {
        // Top cluster cut by lambda_max; classify on its own.
        fam[p].classification = std::abs(fam[p].lambda.imag()) > options.tol.tol_real ? Classification::Nonreal
                                                                                      : Classification::SR;
        continue;
      }
      fam[p].classification = classify(fam[p], cluster, options.tol);
      if (fam[p].classification == Classification::Double) fam[p].multiplicity = 2;
    }
    report.eigenvalues.insert(report.eigenvalues.end(), fam.begin(), fam.end());
  }

  // Independent check against the Galerkin spectrum at t = 0 and t = pi.
  const detail::GalerkinOperator op(q, options.cross_check_K);
  const auto at0 = op.eigenvalues(0.0);
  const auto atpi = op.eigenvalues(kPi);
  for (const auto& e : report.eigenvalues) {
    if (std::abs(e.lambda) > options.cross_check_radius) continue;
    const auto& ref = e.boundary == Boundary::Periodic ? at0 : atpi;
    double best = std::numeric_limits<double>::infinity();
    for (const auto& r : ref) best = std::min(best, std::abs(r - e.lambda));
    report.galerkin_discrepancy = std::max(report.galerkin_discrepancy, best);
    ++report.galerkin_compared;
  }
  return report;
}

}  // namespace hillzone
