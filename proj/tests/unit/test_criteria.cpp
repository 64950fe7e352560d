#include <doctest.h>

#include <cmath>
#include <random>

#include "hillzone/criteria.hpp"
#include "hillzone/errors.hpp"
#include "oracles.hpp"

using namespace hillzone;
using oracle::pi;

namespace {

PeriodicPotential mathieu() { return oracle::fourier({{1, 1.0}, {-1, 1.0}}); }

// q_n = a n^{-2}, q_{-n} = b n^{-2} for 1 <= n <= support.
PeriodicPotential power_law(double a, double b, int support = 300) {
  FourierSeries fs;
  for (int n = 1; n <= support; ++n) {
    fs.coeffs[n] = a / (double(n) * n);
    fs.coeffs[-n] = b / (double(n) * n);
  }
  return PeriodicPotential(fs, 1);
}

PeriodicPotential with_jumps(double c, std::vector<JumpDeclaration> extra = {}) {
  // Im q = c (1/2 - x) jumps by c at 0.
  PiecewisePolynomial pw;
  pw.pieces.push_back({0.0, 1.0, {}, {0.5 * c, -c}});
  extra.insert(extra.begin(), {0.0, Component::Im, 0, c});
  return PeriodicPotential(pw, 0, extra);
}

}  // namespace

TEST_SUITE("criteria") {
  TEST_CASE("antiderivative coefficients in closed form") {
    const auto m = antiderivative_coefficients(mathieu(), 4);
    CHECK(std::abs(m.Q.at(1) - 1.0 / cplx(0, 2 * pi)) < 1e-15);
    CHECK(std::abs(m.Q.at(-1) + 1.0 / cplx(0, 2 * pi)) < 1e-15);
    CHECK(std::abs(m.Q0) < 1e-15);
    CHECK(std::abs(m.S0 - 1.0 / (2 * pi * pi)) < 1e-15);
    CHECK(std::abs(m.S.at(2) + 1.0 / (4 * pi * pi)) < 1e-15);
    CHECK(std::abs(m.S.at(-2) + 1.0 / (4 * pi * pi)) < 1e-15);
    CHECK(std::abs(m.S.at(1)) < 1e-15);
    CHECK(m.tail_bound == 0.0);

    const auto e = antiderivative_coefficients(oracle::fourier({{1, 1.0}}), 4);
    CHECK(std::abs(e.Q0 - cplx(0, 1 / (2 * pi))) < 1e-15);
  }

  TEST_CASE("sawtooth Q and S match quadrature") {
    const auto q = oracle::sawtooth();
    const auto a = antiderivative_coefficients(q, 8);
    // Q(x) = i (x - x^2) / 2 for Im q = 1/2 - x.
    const auto Qf = [](double x) { return cplx(0, 0.5 * (x - x * x)); };
    const auto Sf = [&](double x) { return Qf(x) * Qf(x); };
    const cplx q0 = oracle::integrate([&](double x) { return (1 - x) * q(x); }, 0.0, 1.0);
    CHECK(std::abs(a.Q0 - q0) < 1e-12);
    for (int n = -8; n <= 8; ++n) {
      if (n != 0) CHECK(std::abs(a.Q.at(n) - oracle::fourier_coefficient(Qf, n)) < 1e-12);
      CHECK(std::abs(a.S.at(n) - oracle::fourier_coefficient(Sf, n)) < 1e-9);
    }
    CHECK(a.tail_bound < 1e-9);
  }

  TEST_CASE("P_n values") {
    CHECK(std::abs(p_coefficient(mathieu(), 1).P - 1.0) < 1e-14);
    for (int n = 2; n <= 6; ++n) CHECK(std::abs(p_coefficient(mathieu(), n).P) < 1e-14);

    const auto saw = oracle::sawtooth();
    for (int n : {1, 4, 16, 32, 64}) {
      const auto r = p_coefficient(saw, n);
      CHECK(r.P.real() * 4 * pi * pi * n * n == doctest::Approx(-1.0).epsilon(1e-9));
      CHECK(std::abs(r.P.real() - r.leading_term) <= 0.2 * std::abs(r.leading_term));
    }
  }

  TEST_CASE("P_n from quadrature on the formula") {
    const auto q = oracle::sawtooth();
    const auto Qf = [](double x) { return cplx(0, 0.5 * (x - x * x)); };
    const auto Sf = [&](double x) { return Qf(x) * Qf(x); };
    const cplx Q0 = oracle::integrate([&](double x) { return (1 - x) * q(x); }, 0.0, 1.0);
    for (int n = 1; n <= 6; ++n) {
      const cplx qn = oracle::fourier_coefficient([&](double x) { return q(x); }, n, 4000);
      const cplx qm = oracle::fourier_coefficient([&](double x) { return q(x); }, -n, 4000);
      const cplx P = qn * qm - qn * (oracle::fourier_coefficient(Sf, -n) - 2.0 * Q0 * oracle::fourier_coefficient(Qf, -n)) -
                     qm * (oracle::fourier_coefficient(Sf, n) - 2.0 * Q0 * oracle::fourier_coefficient(Qf, n));
      CHECK(std::abs(p_coefficient(q, n).P - P) < 1e-9);
    }
  }

  TEST_CASE("P_n is real for PT potentials") {
    std::mt19937 rng(21);
    for (int trial = 0; trial < 10; ++trial) {
      const auto q = oracle::random_pt(rng, 6);
      for (const auto& r : p_sequence(q, 20)) CHECK(std::abs(r.P.imag()) < 1e-13);
    }
    CriteriaOptions o;
    o.window = {4, 16};
    CHECK(criteria_report(oracle::sawtooth(), o).max_abs_im_P < 1e-12);
  }

  TEST_CASE("P_n approaches q_n q_{-n}") {
    std::mt19937 rng(8);
    std::uniform_real_distribution<double> u(0.5, 2.0);
    for (int trial = 0; trial < 5; ++trial) {
      const auto q = power_law(u(rng), -u(rng));
      const auto r8 = p_coefficient(q, 8), r64 = p_coefficient(q, 64);
      const double e8 = std::abs(r8.P.real() / r8.leading_term - 1.0);
      const double e64 = std::abs(r64.P.real() / r64.leading_term - 1.0);
      CHECK(e64 < 0.25);
      CHECK(e64 < e8);
    }
  }

  TEST_CASE("reality predictions") {
    const auto saw = summary4_reality(oracle::sawtooth(), 0, {4, 20});
    CHECK(saw.alpha > 0.0);
    for (const auto& p : saw.predictions) {
      CHECK(p.periodic_applicable);
      CHECK(p.antiperiodic_applicable);
      CHECK_FALSE(p.periodic_real);
      CHECK_FALSE(p.antiperiodic_real);
    }
    // P_k vanishes for k >= 2: nothing to predict.
    const auto m = summary4_reality(mathieu(), 4, {4, 20});
    for (const auto& p : m.predictions) {
      CHECK_FALSE(p.periodic_applicable);
      CHECK_FALSE(p.antiperiodic_applicable);
    }
    // Positive P_k predicts real eigenvalues.
    const auto pos = summary4_reality(power_law(1.0, 1.0), 1, {4, 20});
    for (const auto& p : pos.predictions)
      if (p.periodic_applicable) CHECK(p.periodic_real);
  }

  TEST_CASE("sign test on P_n") {
    auto v = theorem5_check(oracle::sawtooth(), 0, {8, 64});
    CHECK(v.holds);
    CHECK(v.fitted_alpha == doctest::Approx(1 / (4 * pi * pi)).epsilon(1e-8));
    CHECK(v.fitted_m == 7);

    CHECK_FALSE(theorem5_check(mathieu(), 4, {8, 64}).holds);
    CHECK_FALSE(theorem5_check(power_law(1.0, 1.0), 1, {8, 64}).holds);
  }

  TEST_CASE("g_n over f_n dominance") {
    auto v = theorem6_check(oracle::sawtooth(), 0, {8, 64});
    CHECK(v.holds);
    CHECK_FALSE(v.fitted_delta.has_value());
    CHECK(v.fitted_beta == doctest::Approx(1 / (2 * pi)).epsilon(1e-8));

    // Only positive frequencies: f_n = g_n, so delta = 1 is not enough.
    FourierSeries one_sided;
    for (int n = 1; n <= 100; ++n) one_sided.coeffs[n] = 1.0 / (double(n) * n);
    v = theorem6_check(PeriodicPotential(one_sided, 1), 1, {8, 64});
    CHECK_FALSE(v.holds);
    REQUIRE(v.fitted_delta.has_value());
    CHECK(*v.fitted_delta == doctest::Approx(1.0));

    CHECK_FALSE(theorem6_check(mathieu(), 4, {8, 64}).holds);
  }

  TEST_CASE("dominance implies the sign test") {
    std::mt19937 rng(4);
    std::uniform_real_distribution<double> u(0.2, 2.0);
    int seen = 0;
    for (int trial = 0; trial < 12; ++trial) {
      const double a = u(rng), b = u(rng) * (trial % 3 == 0 ? 1.0 : -1.0);
      const auto q = power_law(a, b);
      if (theorem6_check(q, 1, {8, 64}).holds) {
        ++seen;
        CHECK(theorem5_check(q, 1, {8, 64}).holds);
      }
    }
    CHECK(seen > 0);
  }

  TEST_CASE("declared jumps") {
    auto v = theorem7_check(oracle::sawtooth());
    CHECK(v.holds);
    CHECK(v.s == 0);
    CHECK(v.c == 1.0);
    CHECK_FALSE(v.d.has_value());
    CHECK_FALSE(v.decay_warning);

    v = theorem7_check(with_jumps(-0.5));
    CHECK(v.holds);
    CHECK(v.c == -0.5);
    CHECK(v.decay_consistency < 0.2);

    v = theorem7_check(with_jumps(1.0, {{0.25, Component::Re, 0, 2.0}}));
    CHECK_FALSE(v.holds);
    CHECK(v.d.value_or(0) == 2.0);

    CHECK_THROWS_AS(theorem7_check(mathieu()), JumpDeclarationRequired);
    CHECK_THROWS_AS(theorem7_check(with_jumps(1.0, {{0.5, Component::Im, 0, 1.0}})), JumpDeclarationRequired);
    CHECK_THROWS_AS(theorem7_check(with_jumps(1.0, {{0.25, Component::Re, 1, 0.5}})), JumpDeclarationRequired);
    CHECK_THROWS_AS(theorem7_check(with_jumps(0.0)), JumpDeclarationRequired);

    // A declaration the coefficients contradict is flagged.
    PiecewisePolynomial pw;
    pw.pieces.push_back({0.0, 1.0, {}, {0.5, -1.0}});
    v = theorem7_check(PeriodicPotential(pw, 0, {{0.0, Component::Im, 0, 3.0}}));
    CHECK(v.decay_warning);
  }

  TEST_CASE("combined verdict") {
    auto r = criteria_report(oracle::sawtooth());
    CHECK(r.combined == AlgebraicVerdict::FiniteZone);
    CHECK(r.records.size() == 129);
    CHECK(r.thm7.has_value());

    r = criteria_report(mathieu());
    CHECK(r.combined == AlgebraicVerdict::NotConcluded);
    CHECK(r.thm7_note == "no jumps declared");

    // Window evidence alone does not conclude unless asserted.
    const auto q = power_law(1.0, -1.0);
    CriteriaOptions o;
    r = criteria_report(q, o);
    CHECK(r.thm6.holds);
    CHECK(r.combined == AlgebraicVerdict::NotConcluded);
    o.assert_asymptotic = true;
    CHECK(criteria_report(q, o).combined == AlgebraicVerdict::FiniteZone);
  }

  TEST_CASE("sampled potentials need enough bandwidth") {
    Sampled s;
    for (int j = 0; j < 64; ++j) s.values.emplace_back(std::cos(2 * pi * j / 64.0), 0.0);
    CHECK_THROWS_AS(criteria_report(PeriodicPotential(s, 2)), BandwidthExceeded);
  }
}
