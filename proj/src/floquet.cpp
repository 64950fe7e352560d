#include "hillzone/floquet.hpp"

#include <array>
#include <cmath>

#include "hillzone/errors.hpp"
#include "hillzone/parallel.hpp"

namespace hillzone {

namespace {

// State (theta, theta', phi, phi').
using State = std::array<cplx, 4>;

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
// b - b*, the difference between the 5th and embedded 4th order weights.
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

struct Rhs {
  const PeriodicPotential& q;
  int segment;
  cplx lambda;

  State operator()(double x, const State& y) const {
    const cplx v = q.segment_value(segment, x) - lambda;
    return {y[1], v * y[0], y[3], v * y[2]};
  }
};

State axpy(const State& y, double h, std::initializer_list<std::pair<double, const State*>> terms) {
  State out = y;
  for (const auto& [w, k] : terms)
    for (std::size_t i = 0; i < 4; ++i) out[i] += h * w * (*k)[i];
  return out;
}

bool finite(const State& y) {
  for (const auto& v : y)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
  return true;
}

}  // namespace

MonodromyResult monodromy(const PeriodicPotential& q, cplx lambda, double tol_ode) {
  if (!(tol_ode > 0.0)) throw NumericsError("tol_ode must be positive");
  // Derivatives are O(sqrt|lambda|) times the values; weight them down so
  // every component contributes to the error norm on the same footing.
  const double w = std::max(1.0, std::sqrt(std::abs(lambda)));
  const std::array<double, 4> weight = {1.0, 1.0 / w, w, 1.0};

  auto norm_of = [&](const State& e, const State& y0, const State& y1) {
    double err = 0.0;
    for (int pair = 0; pair < 2; ++pair) {
      const std::size_t a = 2 * pair, b = a + 1;
      const double size = 1.0 + std::max({std::abs(y0[a]) * weight[a], std::abs(y0[b]) * weight[b],
                                          std::abs(y1[a]) * weight[a], std::abs(y1[b]) * weight[b]});
      err = std::max(err, std::max(std::abs(e[a]) * weight[a], std::abs(e[b]) * weight[b]) / size);
    }
    return err;
  };

  State y = {cplx{1.0}, cplx{0.0}, cplx{0.0}, cplx{1.0}};
  MonodromyResult out;
  out.lambda = lambda;
  constexpr int kMaxSteps = 2'000'000;

  for (int seg = 0; seg < q.segment_count(); ++seg) {
    const auto [left, right] = q.segment(seg);
    const Rhs f{q, seg, lambda};
    double x = left;
    double h = std::min(right - left, 0.05 / w);
    const double h_min = 1e-14 * std::max(1.0, right - left);
    State k1 = f(x, y);
    while (x < right) {
      if (out.steps >= kMaxSteps) throw IntegrationFailure("step budget exhausted", x);
      bool last = false;
      if (x + h >= right) {
        h = right - x;
        last = true;
      }
      const State k2 = f(x + c2 * h, axpy(y, h, {{a21, &k1}}));
      const State k3 = f(x + c3 * h, axpy(y, h, {{a31, &k1}, {a32, &k2}}));
      const State k4 = f(x + c4 * h, axpy(y, h, {{a41, &k1}, {a42, &k2}, {a43, &k3}}));
      const State k5 = f(x + c5 * h, axpy(y, h, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}));
      // Last stage sits at x + h; clamp it to the segment so the closed-end
      // value of the piece is used.
      const double x_end = last ? right : x + h;
      const State k6 =
          f(x_end, axpy(y, h, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}));
      const State y_new = axpy(y, h, {{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}});
      const State k7 = f(x_end, y_new);
      State e{};
      for (std::size_t i = 0; i < 4; ++i)
        e[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);

      if (!finite(y_new)) {
        if (h <= h_min) throw IntegrationFailure("non-finite solution", x);
        h *= 0.25;
        continue;
      }
      const double err = norm_of(e, y, y_new);
      const double ratio = err / (tol_ode * h);
      if (ratio <= 1.0) {
        x = last ? right : x + h;
        y = y_new;
        k1 = k7;
        ++out.steps;
        out.est_error += err;
        const double grow = ratio == 0.0 ? 5.0 : std::min(5.0, 0.9 * std::pow(ratio, -0.25));
        h *= std::max(1.0, grow);
      } else {
        h *= std::max(0.1, 0.9 * std::pow(ratio, -0.25));
        if (h < h_min) throw IntegrationFailure("step size underflow", x);
      }
    }
  }

  out.theta1 = y[0];
  out.theta1p = y[1];
  out.phi1 = y[2];
  out.phi1p = y[3];
  out.discriminant = out.theta1 + out.phi1p;
  return out;
}

std::vector<MonodromyResult> monodromy_batch(const PeriodicPotential& q,
                                             const std::vector<cplx>& lambdas, double tol_ode) {
  return parallel_map<MonodromyResult>(lambdas.size(),
                                       [&](std::size_t i) { return monodromy(q, lambdas[i], tol_ode); });
}

RealityReport discriminant_real_check(const PeriodicPotential& q, const std::vector<double>& grid,
                                      double tol, double tol_ode) {
  std::vector<cplx> lambdas(grid.begin(), grid.end());
  const auto results = monodromy_batch(q, lambdas, tol_ode);
  RealityReport report;
  for (std::size_t i = 0; i < results.size(); ++i) {
    const double im = std::abs(results[i].discriminant.imag());
    if (im > report.max_abs_im || i == 0) {
      report.max_abs_im = im;
      report.worst_lambda = grid[i];
    }
  }
  report.passes = report.max_abs_im <= tol;
  return report;
}

cplx asymptotic_reference(cplx lambda) { return 2.0 * std::cos(std::sqrt(lambda)); }

bool membership(const PeriodicPotential& q, double lambda, double tol_member, double tol_ode) {
  const auto m = monodromy(q, cplx{lambda, 0.0}, tol_ode);
  if (std::abs(m.discriminant.imag()) > tol_member) return false;
  // 2 - F >= 0 and 2 + F >= 0.
  return m.characteristic(+1).real() >= -tol_member && m.characteristic(-1).real() >= -tol_member;
}

}  // namespace hillzone
