#include "hillzone/potential.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <tuple>

#include <fftw3.h>

#include "hillzone/errors.hpp"

namespace hillzone {

namespace {

bool is_power_of_two(std::size_t n) { return n >= 2 && (n & (n - 1)) == 0; }

std::vector<cplx> forward_fft(const std::vector<cplx>& in) {
  // The planner is not thread-safe; execution on a private plan is.
  static std::mutex planner_mutex;
  const int n = static_cast<int>(in.size());
  std::vector<cplx> out(in.size());
  auto* src = reinterpret_cast<fftw_complex*>(const_cast<cplx*>(in.data()));
  auto* dst = reinterpret_cast<fftw_complex*>(out.data());
  fftw_plan plan;
  {
    std::lock_guard lock(planner_mutex);
    plan = fftw_plan_dft_1d(n, src, dst, FFTW_FORWARD, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard lock(planner_mutex);
    fftw_destroy_plan(plan);
  }
  return out;
}

double sinc(double x) { return x == 0.0 ? 1.0 : std::sin(x) / x; }

double horner(const std::vector<double>& p, double u) {
  double acc = 0.0;
  for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * u + *it;
  return acc;
}

double poly_integral(const std::vector<double>& p, double length) {
  double acc = 0.0;
  double pw = length;
  for (std::size_t k = 0; k < p.size(); ++k) {
    acc += p[k] * pw / static_cast<double>(k + 1);
    pw *= length;
  }
  return acc;
}

void check_finite(cplx v, const std::string& where) {
  if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
    throw InvalidPotential("non-finite value in " + where);
}

}  // namespace

cplx polynomial_exp_integral(std::span<const double> poly, double length, double omega) {
  if (poly.empty()) return {0.0, 0.0};
  const double phase = std::abs(omega) * length;
  if (phase < 0.5) {
    // Taylor expansion of exp(-i omega u); avoids cancellation at small omega.
    cplx acc{0.0, 0.0};
    for (std::size_t k = 0; k < poly.size(); ++k) {
      if (poly[k] == 0.0) continue;
      cplx term_sum{0.0, 0.0};
      cplx factor{1.0, 0.0};  // (-i omega)^m / m!
      double lpow = std::pow(length, static_cast<double>(k + 1));
      for (int m = 0; m < 60; ++m) {
        const cplx term = factor * lpow / static_cast<double>(k + m + 1);
        term_sum += term;
        if (std::abs(term) < 1e-18 * std::abs(term_sum) && m > 2) break;
        factor *= cplx{0.0, -omega} / static_cast<double>(m + 1);
        lpow *= length;
      }
      acc += poly[k] * term_sum;
    }
    return acc;
  }
  // Repeated integration by parts:
  //   int p e^{-i w u} du = -e^{-i w u} sum_j p^{(j)}(u) / (i w)^{j+1}.
  std::vector<double> deriv(poly.begin(), poly.end());
  const cplx iw{0.0, omega};
  cplx inv_pow = 1.0 / iw;
  cplx at_end{0.0, 0.0};
  cplx at_start{0.0, 0.0};
  while (!deriv.empty()) {
    at_end += horner(deriv, length) * inv_pow;
    at_start += deriv.front() * inv_pow;
    inv_pow /= iw;
    std::vector<double> next;
    for (std::size_t k = 1; k < deriv.size(); ++k) next.push_back(deriv[k] * static_cast<double>(k));
    deriv = std::move(next);
  }
  const cplx e_end = std::polar(1.0, -omega * length);
  return -(e_end * at_end - at_start);
}

struct PeriodicPotential::Impl {
  Representation rep;
  // FourierSeries: dense (n, q_n) list for evaluation.
  std::vector<std::pair<int, cplx>> terms;
  int max_index = 0;
  // Sampled: spline-exact Fourier coefficients indexed n + bandwidth, and
  // B-spline control values.
  std::vector<cplx> sampled_coeffs;
  std::vector<cplx> bspline;
  std::vector<double> sampled_re_cos;  // spline coefficients of Re q, n >= 0
  std::vector<double> sampled_im_sin;  // spline coefficients of Im q, n >= 0
  int sampled_bandwidth = 0;
};

namespace {

void validate_pieces(const PiecewisePolynomial& pw) {
  if (pw.pieces.empty()) throw InvalidPotential("piecewise potential has no pieces");
  double expected_left = 0.0;
  for (std::size_t i = 0; i < pw.pieces.size(); ++i) {
    const auto& p = pw.pieces[i];
    if (std::abs(p.left - expected_left) > 1e-14)
      throw InvalidPotential("piece " + std::to_string(i) + " does not start where the previous one ends");
    if (!(p.right > p.left)) throw InvalidPotential("piece " + std::to_string(i) + " has empty interval");
    for (double c : p.poly_re) check_finite(c, "piece coefficients");
    for (double c : p.poly_im) check_finite(c, "piece coefficients");
    expected_left = p.right;
  }
  if (std::abs(expected_left - 1.0) > 1e-14) throw InvalidPotential("pieces must cover [0, 1)");
}

// Real and imaginary sample channels through the same spline filter.
std::vector<double> spline_filter(int n_samples, int bandwidth, const std::vector<cplx>& spectrum,
                                  bool cosine) {
  // For a real channel with DFT spectrum X_k, the cosine coefficient is
  // Re(X_n) and the sine coefficient is -Im(X_n) (both times the filter).
  std::vector<double> out(static_cast<std::size_t>(bandwidth) + 1, 0.0);
  const double nn = static_cast<double>(n_samples);
  for (int n = 0; n <= bandwidth; ++n) {
    const double theta = kTwoPi * n / nn;
    const double filter = std::pow(sinc(kPi * n / nn), 4) * 3.0 / (2.0 + std::cos(theta));
    const cplx c = spectrum[static_cast<std::size_t>(n)] / nn * filter;
    out[static_cast<std::size_t>(n)] = cosine ? c.real() : -c.imag();
  }
  return out;
}

}  // namespace

PeriodicPotential::PeriodicPotential(Representation rep, int smoothness_s,
                                     std::vector<JumpDeclaration> jumps)
    : smoothness_(smoothness_s), jumps_(std::move(jumps)) {
  if (smoothness_s < 0) throw InvalidPotential("smoothness index must be non-negative");
  auto impl = std::make_shared<Impl>();
  impl->rep = std::move(rep);
  if (auto* fs = std::get_if<FourierSeries>(&impl->rep)) {
    for (const auto& [n, c] : fs->coeffs) {
      check_finite(c, "Fourier coefficients");
      if (c != cplx{0.0, 0.0}) {
        impl->terms.emplace_back(n, c);
        impl->max_index = std::max(impl->max_index, std::abs(n));
      }
    }
  } else if (auto* pw = std::get_if<PiecewisePolynomial>(&impl->rep)) {
    validate_pieces(*pw);
  } else {
    auto& s = std::get<Sampled>(impl->rep);
    if (!is_power_of_two(s.values.size()) || s.values.size() < 8)
      throw InvalidPotential("sampled grid size must be a power of two >= 8");
    for (const auto& v : s.values) check_finite(v, "samples");
    const int n_samples = static_cast<int>(s.values.size());
    const auto spectrum = forward_fft(s.values);
    impl->sampled_bandwidth = n_samples / 4;
    const int bw = impl->sampled_bandwidth;
    impl->sampled_coeffs.assign(static_cast<std::size_t>(2 * bw + 1), {});
    for (int n = -bw; n <= bw; ++n) {
      const int k = (n % n_samples + n_samples) % n_samples;
      const double theta = kTwoPi * n / n_samples;
      const double filter = std::pow(sinc(kPi * n / n_samples), 4) * 3.0 / (2.0 + std::cos(theta));
      impl->sampled_coeffs[static_cast<std::size_t>(n + bw)] =
          spectrum[static_cast<std::size_t>(k)] / static_cast<double>(n_samples) * filter;
    }
    // B-spline control values c = IDFT(X_k * 6 / (4 + 2 cos theta_k)).
    std::vector<cplx> prefiltered(spectrum.size());
    for (int k = 0; k < n_samples; ++k) {
      const double theta = kTwoPi * k / n_samples;
      // Conjugation turns the forward transform into the inverse one.
      prefiltered[static_cast<std::size_t>(k)] =
          std::conj(spectrum[static_cast<std::size_t>(k)] * 6.0 / (4.0 + 2.0 * std::cos(theta)));
    }
    auto back = forward_fft(prefiltered);
    impl->bspline.resize(back.size());
    for (std::size_t j = 0; j < back.size(); ++j)
      impl->bspline[j] = std::conj(back[j]) / static_cast<double>(n_samples);

    std::vector<cplx> re(s.values.size()), im(s.values.size());
    for (std::size_t j = 0; j < s.values.size(); ++j) {
      re[j] = s.values[j].real();
      im[j] = s.values[j].imag();
    }
    impl->sampled_re_cos = spline_filter(n_samples, bw, forward_fft(re), true);
    impl->sampled_im_sin = spline_filter(n_samples, bw, forward_fft(im), false);
  }
  impl_ = std::move(impl);
}

PeriodicPotential PeriodicPotential::zero() { return PeriodicPotential(FourierSeries{}); }

const PeriodicPotential::Representation& PeriodicPotential::representation() const {
  return impl_->rep;
}

std::string PeriodicPotential::kind_name() const {
  switch (impl_->rep.index()) {
    case 0: return "fourier";
    case 1: return "piecewise";
    default: return "sampled";
  }
}

int PeriodicPotential::smoothness() const { return smoothness_; }

const std::vector<JumpDeclaration>& PeriodicPotential::jumps() const { return jumps_; }

int PeriodicPotential::bandwidth() const {
  switch (impl_->rep.index()) {
    case 0:
    case 1: return std::numeric_limits<int>::max() / 4;
    default: return impl_->sampled_bandwidth;
  }
}

int PeriodicPotential::support() const {
  if (impl_->rep.index() == 0) return impl_->max_index;
  return -1;
}

cplx PeriodicPotential::coefficient(int n) const {
  if (std::abs(n) > bandwidth()) throw BandwidthExceeded(std::abs(n), bandwidth());
  switch (impl_->rep.index()) {
    case 0: {
      const auto& c = std::get<FourierSeries>(impl_->rep).coeffs;
      auto it = c.find(n);
      return it == c.end() ? cplx{0.0, 0.0} : it->second;
    }
    case 1: {
      const auto& pw = std::get<PiecewisePolynomial>(impl_->rep);
      const double omega = kTwoPi * n;
      cplx acc{0.0, 0.0};
      for (const auto& p : pw.pieces) {
        const double len = p.right - p.left;
        const cplx local = polynomial_exp_integral(p.poly_re, len, omega) +
                           cplx{0.0, 1.0} * polynomial_exp_integral(p.poly_im, len, omega);
        acc += std::polar(1.0, -omega * p.left) * local;
      }
      return acc;
    }
    default:
      return impl_->sampled_coeffs[static_cast<std::size_t>(n + impl_->sampled_bandwidth)];
  }
}

cplx PeriodicPotential::operator()(double x) const {
  x -= std::floor(x);
  if (impl_->rep.index() == 1) {
    const auto& pieces = std::get<PiecewisePolynomial>(impl_->rep).pieces;
    auto it = std::upper_bound(pieces.begin(), pieces.end(), x,
                               [](double v, const PolynomialPiece& p) { return v < p.left; });
    const int idx = std::max(0, static_cast<int>(it - pieces.begin()) - 1);
    return segment_value(idx, x);
  }
  return segment_value(0, x);
}

int PeriodicPotential::segment_count() const {
  if (impl_->rep.index() == 1)
    return static_cast<int>(std::get<PiecewisePolynomial>(impl_->rep).pieces.size());
  return 1;
}

std::pair<double, double> PeriodicPotential::segment(int i) const {
  if (impl_->rep.index() == 1) {
    const auto& p = std::get<PiecewisePolynomial>(impl_->rep).pieces.at(static_cast<std::size_t>(i));
    return {p.left, p.right};
  }
  return {0.0, 1.0};
}

cplx PeriodicPotential::segment_value(int i, double x) const {
  switch (impl_->rep.index()) {
    case 0: {
      if (impl_->terms.empty()) return {0.0, 0.0};
      const cplx base = std::polar(1.0, kTwoPi * x);
      cplx acc{0.0, 0.0};
      for (const auto& [n, c] : impl_->terms) {
        // Small supports dominate; integer powers of the base phasor are exact
        // enough and far cheaper than polar() per term.
        acc += c * (n >= 0 ? std::pow(base, n) : std::pow(std::conj(base), -n));
      }
      return acc;
    }
    case 1: {
      const auto& p = std::get<PiecewisePolynomial>(impl_->rep).pieces[static_cast<std::size_t>(i)];
      const double u = x - p.left;
      return {horner(p.poly_re, u), horner(p.poly_im, u)};
    }
    default: {
      const auto& c = impl_->bspline;
      const int n = static_cast<int>(c.size());
      double y = (x - std::floor(x)) * n;
      int j0 = static_cast<int>(std::floor(y));
      const double u = y - j0;
      const double u2 = u * u;
      const double u3 = u2 * u;
      const double w0 = (1.0 - u) * (1.0 - u) * (1.0 - u) / 6.0;
      const double w1 = (3.0 * u3 - 6.0 * u2 + 4.0) / 6.0;
      const double w2 = (-3.0 * u3 + 3.0 * u2 + 3.0 * u + 1.0) / 6.0;
      const double w3 = u3 / 6.0;
      auto at = [&](int j) { return c[static_cast<std::size_t>(((j % n) + n) % n)]; };
      return w0 * at(j0 - 1) + w1 * at(j0) + w2 * at(j0 + 1) + w3 * at(j0 + 2);
    }
  }
}

ValueBounds PeriodicPotential::bounds() const {
  ValueBounds b;
  switch (impl_->rep.index()) {
    case 0: {
      double total = 0.0;
      for (const auto& [n, c] : impl_->terms) total += std::abs(c);
      b.min_re = -total;
      b.max_re = total;
      b.max_abs_im = total;
      return b;
    }
    case 1: {
      b.min_re = std::numeric_limits<double>::infinity();
      b.max_re = -b.min_re;
      const auto& pieces = std::get<PiecewisePolynomial>(impl_->rep).pieces;
      for (int i = 0; i < static_cast<int>(pieces.size()); ++i) {
        const auto [lo, hi] = segment(i);
        for (int k = 0; k <= 512; ++k) {
          const cplx v = segment_value(i, lo + (hi - lo) * k / 512.0);
          b.min_re = std::min(b.min_re, v.real());
          b.max_re = std::max(b.max_re, v.real());
          b.max_abs_im = std::max(b.max_abs_im, std::abs(v.imag()));
        }
      }
      break;
    }
    default: {
      b.min_re = std::numeric_limits<double>::infinity();
      b.max_re = -b.min_re;
      for (const auto& v : std::get<Sampled>(impl_->rep).values) {
        b.min_re = std::min(b.min_re, v.real());
        b.max_re = std::max(b.max_re, v.real());
        b.max_abs_im = std::max(b.max_abs_im, std::abs(v.imag()));
      }
      break;
    }
  }
  // Sampling and spline overshoot margin.
  const double span = std::max(b.max_re - b.min_re, b.max_abs_im);
  b.min_re -= 0.1 * span + 1e-3;
  b.max_re += 0.1 * span + 1e-3;
  b.max_abs_im += 0.1 * span + 1e-3;
  return b;
}

PeriodicPotential normalize(const PeriodicPotential& q) {
  const auto& rep = q.representation();
  if (const auto* fs = std::get_if<FourierSeries>(&rep)) {
    FourierSeries out = *fs;
    out.coeffs.erase(0);
    return PeriodicPotential(std::move(out), q.smoothness(), q.jumps());
  }
  if (const auto* pw = std::get_if<PiecewisePolynomial>(&rep)) {
    cplx mean{0.0, 0.0};
    for (const auto& p : pw->pieces) {
      const double len = p.right - p.left;
      mean += cplx{poly_integral(p.poly_re, len), poly_integral(p.poly_im, len)};
    }
    PiecewisePolynomial out = *pw;
    for (auto& p : out.pieces) {
      if (p.poly_re.empty()) p.poly_re.push_back(0.0);
      if (p.poly_im.empty()) p.poly_im.push_back(0.0);
      p.poly_re[0] -= mean.real();
      p.poly_im[0] -= mean.imag();
    }
    return PeriodicPotential(std::move(out), q.smoothness(), q.jumps());
  }
  const auto& s = std::get<Sampled>(rep);
  cplx mean{0.0, 0.0};
  for (const auto& v : s.values) mean += v;
  // The spline's mean equals the sample mean (filter is 1 at n = 0).
  mean /= static_cast<double>(s.values.size());
  Sampled out = s;
  for (auto& v : out.values) v -= mean;
  return PeriodicPotential(std::move(out), q.smoothness(), q.jumps());
}

PTReport validate_pt(const PeriodicPotential& q, double tol_pt, int max_index) {
  PTReport r;
  int limit = std::min(max_index, q.bandwidth());
  if (q.support() >= 0) limit = q.support();
  r.checked_up_to = limit;
  for (int n = -limit; n <= limit; ++n)
    r.max_violation = std::max(r.max_violation, std::abs(q.coefficient(n).imag()));
  r.is_pt = r.max_violation <= tol_pt;
  return r;
}

std::pair<double, double> PeriodicPotential::cosine_sine(int n) const {
  if (std::abs(n) > bandwidth()) throw BandwidthExceeded(std::abs(n), bandwidth());
  switch (impl_->rep.index()) {
    case 1: {
      // Cosine/sine integrals of the real and imaginary polynomials directly.
      const auto& pw = std::get<PiecewisePolynomial>(impl_->rep);
      const double omega = kTwoPi * n;
      cplx re_acc{0.0, 0.0}, im_acc{0.0, 0.0};
      for (const auto& p : pw.pieces) {
        const double len = p.right - p.left;
        const cplx shift = std::polar(1.0, -omega * p.left);
        re_acc += shift * polynomial_exp_integral(p.poly_re, len, omega);
        im_acc += shift * polynomial_exp_integral(p.poly_im, len, omega);
      }
      return {re_acc.real(), -im_acc.imag()};
    }
    case 2: {
      const auto k = static_cast<std::size_t>(std::abs(n));
      const double sign = n < 0 ? -1.0 : 1.0;
      return {impl_->sampled_re_cos[k], sign * impl_->sampled_im_sin[k]};
    }
    default: {
      const cplx a = coefficient(n);
      const cplx b = coefficient(-n);
      return {0.5 * (a + std::conj(b)).real(), 0.5 * (a - std::conj(b)).real()};
    }
  }
}

FourierTriple fourier_triple(const PeriodicPotential& q, int n) {
  if (n < 1) throw InvalidPotential("fourier_triple needs n >= 1");
  if (n > q.bandwidth()) throw BandwidthExceeded(n, q.bandwidth());
  FourierTriple t;
  t.n = n;
  t.q_plus = q.coefficient(n);
  t.q_minus = q.coefficient(-n);
  std::tie(t.f_n, t.g_n) = q.cosine_sine(n);
  return t;
}

}  // namespace hillzone
