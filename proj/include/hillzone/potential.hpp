#pragma once

#include <complex>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace hillzone {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Fourier representation: q(x) = sum_n q_n exp(2 pi i n x).
struct FourierSeries {
  std::map<int, cplx> coeffs;
};

/// One polynomial piece on [left, right). Coefficients are in ascending
/// powers of the local variable u = x - left.
struct PolynomialPiece {
  double left = 0.0;
  double right = 1.0;
  std::vector<double> poly_re;
  std::vector<double> poly_im;
};

/// Pieces must tile [0, 1) in order. The value at a breakpoint is the right
/// limit.
struct PiecewisePolynomial {
  std::vector<PolynomialPiece> pieces;
};

/// Values on the uniform grid x_j = j / N, N a power of two. The potential
/// is the periodic cubic spline through these values; its Fourier
/// coefficients are computed exactly for that spline via one FFT.
struct Sampled {
  std::vector<cplx> values;
};

enum class Component { Re, Im };

/// A user-declared jump of the s-th derivative of Re q or Im q.
struct JumpDeclaration {
  double location = 0.0;
  Component component = Component::Im;
  int order = 0;
  double size = 0.0;  // value(a+0) - value(a-0)
};

struct ValueBounds {
  double min_re = 0.0;
  double max_re = 0.0;
  double max_abs_im = 0.0;
};

/// A 1-periodic complex potential. Immutable once built; copies share the
/// cached coefficient tables, so values are cheap to pass to workers.
class PeriodicPotential {
 public:
  using Representation = std::variant<FourierSeries, PiecewisePolynomial, Sampled>;

  explicit PeriodicPotential(Representation rep, int smoothness_s = 0,
                             std::vector<JumpDeclaration> jumps = {});

  static PeriodicPotential zero();

  const Representation& representation() const;
  std::string kind_name() const;
  int smoothness() const;
  const std::vector<JumpDeclaration>& jumps() const;

  /// q_n = int_0^1 q(x) exp(-2 pi i n x) dx. Throws BandwidthExceeded when
  /// |n| is beyond bandwidth().
  cplx coefficient(int n) const;

  /// (int Re q cos 2 pi n x, int Im q sin 2 pi n x), computed from the real
  /// and imaginary channels separately.
  std::pair<double, double> cosine_sine(int n) const;

  /// Largest |n| for which coefficient(n) is meaningful.
  int bandwidth() const;

  /// For FourierSeries, the largest |n| with a stored coefficient; -1 for
  /// representations with infinitely many nonzero coefficients.
  int support() const;

  cplx operator()(double x) const;

  /// Smooth segments of [0, 1]. Integrators restart at every segment
  /// boundary and evaluate with segment_value() so each piece is used on its
  /// closed interval.
  int segment_count() const;
  std::pair<double, double> segment(int i) const;
  cplx segment_value(int i, double x) const;

  /// Conservative envelope of q over a period.
  ValueBounds bounds() const;

 private:
  struct Impl;
  std::shared_ptr<const Impl> impl_;
  int smoothness_ = 0;
  std::vector<JumpDeclaration> jumps_;
};

/// Subtract the mean so q_0 = 0 exactly. Idempotent.
PeriodicPotential normalize(const PeriodicPotential& q);

struct PTReport {
  bool is_pt = false;
  double max_violation = 0.0;
  int checked_up_to = 0;
};

/// PT symmetry conj(q(-x)) = q(x) holds iff every Fourier coefficient is
/// real: conj(q(-x)) has coefficients conj(q_n), so the identity is
/// q_n = conj(q_n) for all n. Equivalently Re q is even and Im q is odd, and
/// then q_n = f_n + g_n, q_{-n} = f_n - g_n with f_n, g_n the cosine and sine
/// coefficients of Re q and Im q.
PTReport validate_pt(const PeriodicPotential& q, double tol_pt = 1e-10, int max_index = 256);

struct FourierTriple {
  int n = 1;
  cplx q_plus;   // q_n
  cplx q_minus;  // q_{-n}
  double f_n = 0.0;  // int Re q cos(2 pi n x)
  double g_n = 0.0;  // int Im q sin(2 pi n x)
};

FourierTriple fourier_triple(const PeriodicPotential& q, int n);

/// Coefficients of the integral of a real polynomial times a complex
/// exponential; exposed for the criteria module and tests.
cplx polynomial_exp_integral(std::span<const double> poly, double length, double omega);

}  // namespace hillzone
