#pragma once

#include <vector>

#include "hillzone/potential.hpp"

namespace hillzone {

/// Boundary values at x = 1 of the fundamental solutions of -y'' + q y = lambda y
/// with theta(0) = phi'(0) = 1, theta'(0) = phi(0) = 0.
struct MonodromyResult {
  cplx lambda;
  cplx theta1;
  cplx theta1p;
  cplx phi1;
  cplx phi1p;
  cplx discriminant;      // theta1 + phi1p
  double est_error = 0.0;  // accumulated local error, relative to solution size
  int steps = 0;

  double wronskian_error() const { return std::abs(theta1 * phi1p - theta1p * phi1 - 1.0); }

  /// det(M - sign I) = (theta1 - sign)(phi1p - sign) - theta1p phi1, which
  /// equals 2 - sign F. The product form keeps relative accuracy near
  /// multiple roots, where 2 - F itself is a difference of O(1) numbers.
  cplx characteristic(int sign) const {
    const double s = sign > 0 ? 1.0 : -1.0;
    return (theta1 - s) * (phi1p - s) - theta1p * phi1;
  }
};

inline constexpr double kDefaultTolOde = 1e-10;
inline constexpr double kDefaultTolMember = 1e-7;

/// Integrates both initial value problems over [0, 1] with an adaptive
/// Dormand-Prince 5(4) pair, restarting at every segment boundary of q.
/// Step control is per unit step, so est_error <= tol_ode.
MonodromyResult monodromy(const PeriodicPotential& q, cplx lambda, double tol_ode = kDefaultTolOde);

/// Evaluates monodromy on a list of lambdas in parallel.
std::vector<MonodromyResult> monodromy_batch(const PeriodicPotential& q,
                                             const std::vector<cplx>& lambdas,
                                             double tol_ode = kDefaultTolOde);

struct RealityReport {
  double max_abs_im = 0.0;
  double worst_lambda = 0.0;
  bool passes = false;
};

/// max |Im F(lambda)| over a real grid. For PT-symmetric q, F is real on
/// the real axis.
RealityReport discriminant_real_check(const PeriodicPotential& q, const std::vector<double>& grid,
                                      double tol, double tol_ode = kDefaultTolOde);

/// 2 cos(sqrt(lambda)) on the principal branch.
cplx asymptotic_reference(cplx lambda);

/// True iff F(lambda) lies in [-2, 2] up to tol_member. The endpoint tests
/// use the product forms of 2 -/+ F.
bool membership(const PeriodicPotential& q, double lambda, double tol_member = kDefaultTolMember,
                double tol_ode = kDefaultTolOde);

}  // namespace hillzone
