#pragma once

#include <vector>

#include "hillzone/potential.hpp"

namespace hillzone::detail {

/// Fourier coefficients q_d for |d| <= 2K, cached so repeated solves at
/// different t do not recompute them.
class GalerkinOperator {
 public:
  GalerkinOperator(const PeriodicPotential& q, int K);

  int K() const { return K_; }
  bool is_real() const { return real_; }
  std::vector<cplx> eigenvalues(double t) const;

 private:
  int K_;
  bool real_ = true;
  std::vector<cplx> coeffs_;  // index d + 2K
};

}  // namespace hillzone::detail
