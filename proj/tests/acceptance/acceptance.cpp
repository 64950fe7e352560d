// Runs the acceptance criteria and prints one PASS/FAIL line per criterion.
// Exit status is nonzero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "hillzone/criteria.hpp"
#include "hillzone/floquet.hpp"
#include "hillzone/potential_io.hpp"
#include "hillzone/spectrum.hpp"

using namespace hillzone;

namespace {

constexpr double pi = 3.14159265358979323846;

struct Result {
  bool pass = false;
  std::string detail;
};

PeriodicPotential load(const std::string& name) {
  return normalize(load_potential_file(std::string(HILLZONE_TEST_DATA) + "/" + name).potential);
}

PeriodicPotential fourier(std::initializer_list<std::pair<int, cplx>> terms, int s = 4) {
  FourierSeries fs;
  for (const auto& [n, c] : terms) fs.coeffs[n] = c;
  return PeriodicPotential(fs, s);
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

Result free_closed_form() {
  const auto start = std::chrono::steady_clock::now();
  std::vector<cplx> grid;
  for (int j = 0; j < 200; ++j) grid.emplace_back(2000.0 * j / 199, 0.0);
  const auto rows = monodromy_batch(PeriodicPotential::zero(), grid);
  double worst = 0.0;
  for (const auto& m : rows) worst = std::max(worst, std::abs(m.discriminant - 2.0 * std::cos(std::sqrt(m.lambda))));
  const double t = seconds_since(start);
  return {worst <= 1e-9 && t < 5.0, "max |F - 2 cos sqrt(lambda)| = " + fmt("%.3g", worst) + ", " + fmt("%.2f", t) + " s"};
}

Result wronskian() {
  const std::vector<std::pair<std::string, PeriodicPotential>> qs = {
      {"fourier", load("mathieu.yaml")}, {"piecewise", load("sawtooth.yaml")}, {"sampled", load("sampled_pt.yaml")}};
  std::mt19937 rng(2024);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<cplx> disc;
  for (int i = 0; i < 100; ++i) disc.push_back(std::polar(1e4 * std::sqrt(u(rng)), 2 * pi * u(rng)));
  // Same count restricted to |Im sqrt(lambda)| <= 3, where double precision
  // can hold the Wronskian of exponentially growing solutions.
  std::vector<cplx> moderate;
  while (moderate.size() < 100) {
    const cplx z = std::polar(1e4 * std::sqrt(u(rng)), 2 * pi * u(rng));
    if (std::abs(std::sqrt(z).imag()) <= 3.0) moderate.push_back(z);
  }
  double worst = 0.0, worst_moderate = 0.0;
  cplx worst_lambda;
  int failures = 0;
  for (const auto& [kind, q] : qs) {
    for (const auto& m : monodromy_batch(q, disc)) {
      const double e = m.wronskian_error();
      if (!(e <= 1e-8)) ++failures;
      if (!(e <= worst)) {
        worst = e;
        worst_lambda = m.lambda;
      }
    }
    for (const auto& m : monodromy_batch(q, moderate)) worst_moderate = std::max(worst_moderate, m.wronskian_error());
  }
  std::ostringstream d;
  d << failures << "/300 evaluations above 1e-8, worst " << fmt("%.3g", worst) << " at lambda = "
    << fmt("%.4g", worst_lambda.real()) << (worst_lambda.imag() < 0 ? " - " : " + ")
    << fmt("%.4g", std::abs(worst_lambda.imag())) << "i; with |Im sqrt(lambda)| <= 3 the worst is "
    << fmt("%.3g", worst_moderate);
  return {failures == 0, d.str()};
}

std::vector<double> first_real(std::vector<double> v, std::size_t count) {
  std::sort(v.begin(), v.end());
  v.resize(std::min(v.size(), count));
  return v;
}

Result mathieu_cross_method() {
  const auto start = std::chrono::steady_clock::now();
  const auto q = load("mathieu.yaml");
  std::vector<double> gp, ga;
  for (auto z : galerkin_eigenvalues(q, 0.0, 64)) gp.push_back(z.real());
  for (auto z : galerkin_eigenvalues(q, pi, 64)) ga.push_back(z.real());
  gp = first_real(gp, 10);
  ga = first_real(ga, 10);

  const auto roots = two_periodic_roots(q, gp.back() + 100.0);
  std::vector<double> rp, ra;
  for (const auto& e : roots.eigenvalues) (e.boundary == Boundary::Periodic ? rp : ra).push_back(e.lambda.real());
  rp = first_real(rp, 10);
  ra = first_real(ra, 10);
  if (rp.size() < 10 || ra.size() < 10)
    return {false, "root finder returned " + std::to_string(rp.size()) + " periodic and " +
                       std::to_string(ra.size()) + " antiperiodic eigenvalues"};
  double worst = 0.0;
  for (int i = 0; i < 10; ++i) worst = std::max({worst, std::abs(gp[i] - rp[i]), std::abs(ga[i] - ra[i])});
  const double t = seconds_since(start);
  return {worst <= 1e-6 && t < 60.0, "max discrepancy " + fmt("%.3g", worst) + " over 20 eigenvalues, " +
                                         fmt("%.2f", t) + " s"};
}

Result localization_bound() {
  const auto q = fourier({{1, 0.4}});
  const int K = 96;
  const int n_est = estimate_n_est(q, K);
  double worst_ratio = 0.0;
  for (double t : {kZoneH, pi / 4, pi / 2, pi - kZoneH}) {
    const auto m = number_eigenvalues(galerkin_eigenvalues(q, t, K), t, n_est, galerkin_index_limit(K));
    for (int n = 10; n <= 30; ++n)
      for (int k : {n, -n}) {
        const double center = 2 * pi * k + t;
        worst_ratio = std::max(worst_ratio, std::abs(m.at(k) - center * center) * std::sqrt(double(n)));
      }
  }
  return {worst_ratio <= 1.0, "max |lambda_n(t) - (2 pi n + t)^2| sqrt(n) = " + fmt("%.3g", worst_ratio) +
                                  " over n = +-10..30 and 4 quasimomenta"};
}

Result conjugation() {
  const std::vector<PeriodicPotential> qs = {load("mathieu.yaml"), load("sawtooth.yaml"),
                                             fourier({{1, 1.25}, {-1, 0.75}})};
  double worst = 0.0;
  for (const auto& q : qs)
    for (double t : {0.0, pi / 4, pi / 2, 3 * pi / 4, pi}) worst = std::max(worst, conjugation_closure(q, t, 64));
  return {worst < 1e-6, "max defect " + fmt("%.3g", worst) + " over 3 potentials x 5 quasimomenta"};
}

Result p_values() {
  const double p1 = p_coefficient(load("mathieu.yaml"), 1).P.real();
  const auto saw = p_sequence(load("sawtooth.yaml"), 64);
  bool ok = std::abs(p1 - 1.0) <= 1e-8;
  double worst = 0.0;
  for (int n = 16; n <= 64; ++n) {
    const double p = saw[n - 1].P.real();
    ok = ok && p < 0.0;
    worst = std::max(worst, std::abs(p * n * n * 4 * pi * pi + 1.0));
  }
  ok = ok && worst <= 0.25;
  return {ok, "Mathieu P_1 = " + fmt("%.15g", p1) + "; sawtooth max |4 pi^2 n^2 P_n + 1| = " + fmt("%.3g", worst) +
                  " on [16, 64]"};
}

// Index m of the free center (pi m)^2 nearest to lambda.
int center_index(cplx lambda) { return int(std::lround(std::sqrt(std::max(0.0, lambda.real())) / pi)); }

Result sawtooth_end_to_end() {
  const auto start = std::chrono::steady_clock::now();
  const auto q = load("sawtooth.yaml");
  std::ostringstream d;
  bool ok = true;

  const auto t6 = theorem6_check(q, 0, {8, 64});
  ok = ok && t6.holds;
  const auto t7 = theorem7_check(q);
  ok = ok && t7.holds && t7.c == 1.0 && t7.d.value_or(0.0) == 0.0;
  d << "g/f dominance " << (t6.holds ? "holds" : "fails") << "; jump test " << (t7.holds ? "holds" : "fails")
    << " (c = " << t7.c << ", d = " << t7.d.value_or(0.0) << ")";

  const auto s4 = summary4_reality(q, 0, {4, 20});
  int applicable = 0, predicted_real = 0;
  for (const auto& p : s4.predictions) {
    applicable += p.periodic_applicable + p.antiperiodic_applicable;
    predicted_real += (p.periodic_applicable && p.periodic_real) + (p.antiperiodic_applicable && p.antiperiodic_real);
  }
  ok = ok && applicable > 0 && predicted_real == 0;
  d << "; reality predictions " << applicable << " applicable, " << predicted_real << " real";

  SpectrumTolerances tol;
  const auto roots = two_periodic_roots(q, 4000.0);
  std::map<int, bool> paired;
  for (const auto& e : roots.eigenvalues) {
    if (std::abs(e.lambda.imag()) <= tol.tol_real) continue;
    for (const auto& f : roots.eigenvalues)
      if (f.boundary == e.boundary && std::abs(f.lambda - std::conj(e.lambda)) <= tol.tol_conj)
        paired[center_index(e.lambda)] = true;
  }
  int run = 0, best = 0, prev = -10;
  for (const auto& [m, yes] : paired) {
    run = (m == prev + 1) ? run + 1 : 1;
    best = std::max(best, run);
    prev = m;
  }
  ok = ok && best >= 5;
  d << "; " << best << " consecutive centers with conjugate pairs";

  const auto g = gaps(q, 10);
  ok = ok && g.verdict == Verdict::FiniteZone;
  d << "; spectral verdict " << to_string(g.verdict);
  const double t = seconds_since(start);
  ok = ok && t < 300.0;
  d << "; " << fmt("%.1f", t) << " s";
  return {ok, d.str()};
}

Result exp_gaps() {
  const auto q = fourier({{1, 1.0}});
  const auto g = gaps(q, 8);
  double widest = 0.0;
  for (const auto& gap : g.gaps) widest = std::max(widest, gap.right - gap.left);
  // Galerkin oracle: the pair splitting at each cluster center.
  double split = 0.0;
  const int K = 64;
  for (double t : {0.0, pi}) {
    const auto m = number_eigenvalues(galerkin_eigenvalues(q, t, K), t, 1, galerkin_index_limit(K));
    for (int n = 1; n <= 8; ++n) {
      const int mate = t == 0.0 ? -n : -n - 1;
      split = std::max(split, std::abs(m.at(n) - m.at(mate)));
    }
  }
  const bool ok = widest < 1e-6 && split < 1e-6;
  return {ok, std::to_string(g.gaps.size()) + " gaps, widest " + fmt("%.3g", widest) +
                  "; largest Galerkin pair splitting " + fmt("%.3g", split)};
}

Result mathieu_reality() {
  const auto q = load("mathieu.yaml");
  const auto s4 = summary4_reality(q, q.smoothness(), {4, 20});
  const auto g = gaps(q, 20);
  int checked = 0, mismatches = 0;
  for (const auto& p : s4.predictions) {
    for (Boundary b : {Boundary::Periodic, Boundary::Antiperiodic}) {
      const bool applicable = b == Boundary::Periodic ? p.periodic_applicable : p.antiperiodic_applicable;
      if (!applicable) continue;
      const bool predicted = b == Boundary::Periodic ? p.periodic_real : p.antiperiodic_real;
      for (const auto& c : g.clusters) {
        if (c.n != p.n || c.boundary != b) continue;
        ++checked;
        if (predicted != (c.classification != Classification::Nonreal)) ++mismatches;
      }
    }
  }
  std::ostringstream d;
  d << checked << " applicable predictions, " << mismatches << " mismatches";
  if (checked == 0) d << " (P_k = 0 for every k >= 2, so the hypothesis never applies on [4, 20])";
  return {mismatches == 0, d.str()};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Result()>>> criteria = {
      {"free-potential closed form", free_closed_form},
      {"Wronskian conservation", wronskian},
      {"Galerkin vs root finding (Mathieu)", mathieu_cross_method},
      {"asymptotic localization bound", localization_bound},
      {"conjugation closure", conjugation},
      {"P_n oracle values", p_values},
      {"sawtooth end to end", sawtooth_end_to_end},
      {"closed gaps for exp(2 pi i x)", exp_gaps},
      {"reality predictions vs spectrum (Mathieu)", mathieu_reality},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Result r;
    try {
      r = criteria[i].second();
    } catch (const std::exception& e) {
      r = {false, std::string("exception: ") + e.what()};
    }
    failed += !r.pass;
    std::printf("criterion %zu %s: %s: %s\n", i + 1, r.pass ? "PASS" : "FAIL", criteria[i].first.c_str(),
                r.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
