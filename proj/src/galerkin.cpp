#include "galerkin_internal.hpp"

#include <Eigen/Eigenvalues>

#include "hillzone/errors.hpp"
#include "hillzone/spectrum.hpp"

namespace hillzone {

namespace detail {

GalerkinOperator::GalerkinOperator(const PeriodicPotential& q, int K) : K_(K) {
  if (K < 8) throw NumericsError("Galerkin truncation K must be at least 8");
  const int span = 2 * K;
  const int limit = std::min(span, q.bandwidth());
  const int support = q.support();
  coeffs_.assign(static_cast<std::size_t>(2 * span + 1), cplx{0.0, 0.0});
  double largest = 0.0;
  for (int d = -limit; d <= limit; ++d) {
    if (d == 0 || (support >= 0 && std::abs(d) > support)) continue;
    const cplx c = q.coefficient(d);
    coeffs_[static_cast<std::size_t>(d + span)] = c;
    largest = std::max(largest, std::abs(c));
  }
  // Quadrature of piecewise data leaves rounding-level imaginary parts on
  // coefficients that are real in exact arithmetic; those still take the
  // (much faster) real eigensolver.
  for (auto& c : coeffs_) {
    if (std::abs(c.imag()) > 1e-14 * largest) {
      real_ = false;
      break;
    }
  }
  if (real_)
    for (auto& c : coeffs_) c = c.real();
}

std::vector<cplx> GalerkinOperator::eigenvalues(double t) const {
  const int dim = 2 * K_ + 1;
  const int span = 2 * K_;
  std::vector<cplx> out;
  out.reserve(static_cast<std::size_t>(dim));
  if (real_) {
    Eigen::MatrixXd a(dim, dim);
    for (int r = 0; r < dim; ++r)
      for (int c = 0; c < dim; ++c)
        a(r, c) = coeffs_[static_cast<std::size_t>(r - c + span)].real();
    for (int r = 0; r < dim; ++r) {
      const double d = kTwoPi * (r - K_) + t;
      a(r, r) = d * d;
    }
    Eigen::EigenSolver<Eigen::MatrixXd> solver(a, false);
    if (solver.info() != Eigen::Success) throw NumericsError("real eigensolver did not converge");
    for (int i = 0; i < dim; ++i) out.push_back(solver.eigenvalues()[i]);
  } else {
    Eigen::MatrixXcd a(dim, dim);
    for (int r = 0; r < dim; ++r)
      for (int c = 0; c < dim; ++c) a(r, c) = coeffs_[static_cast<std::size_t>(r - c + span)];
    for (int r = 0; r < dim; ++r) {
      const double d = kTwoPi * (r - K_) + t;
      a(r, r) = d * d;
    }
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(a, false);
    if (solver.info() != Eigen::Success) throw NumericsError("complex eigensolver did not converge");
    for (int i = 0; i < dim; ++i) out.push_back(solver.eigenvalues()[i]);
  }
  return out;
}

}  // namespace detail

std::vector<cplx> galerkin_eigenvalues(const PeriodicPotential& q, double t, int K) {
  return detail::GalerkinOperator(q, K).eigenvalues(t);
}

double galerkin_trusted_bound(int K) {
  const double edge = kTwoPi * (K / 3.0) + kPi;
  return edge * edge;
}

double conjugation_closure(const PeriodicPotential& q, double t, int K) {
  const auto eig = galerkin_eigenvalues(q, t, K);
  const double bound = galerkin_trusted_bound(K);
  double defect = 0.0;
  for (const auto& l : eig) {
    if (l.real() > bound) continue;
    double best = std::numeric_limits<double>::infinity();
    for (const auto& m : eig) best = std::min(best, std::abs(std::conj(l) - m));
    defect = std::max(defect, best);
  }
  return defect;
}

}  // namespace hillzone
