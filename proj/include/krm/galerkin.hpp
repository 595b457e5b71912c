#pragma once

#include <Eigen/Dense>

#include "krm/basis.hpp"
#include "krm/kernel.hpp"
#include "krm/quadrature.hpp"

namespace krm {

// Deterministic M x M Galerkin matrix T_M(m, n) = int int f(x, y) phi_m(x) phi_n(y) dx dy.
struct TMatrix {
  int M = 0;
  BasisId basis;
  Eigen::MatrixXd entries;
  KernelSpec kernel = KernelSpec::sinc(1.0);
  // A-priori bound on the floating-point error of any single entry.
  double entry_error_bound = 0.0;
};

// Smallest Gauss order accepted by assemble_T:
// max(2M, ceil(e c) + 20) for the sinc kernel, with the same bandwidth term for a
// scaled-Hermite basis; 2M for custom kernels in a polynomial basis.
int required_quadrature_order(const KernelSpec& kernel, const BasisId& basis, int M);

// Tensor-product Gauss quadrature of the double integral, symmetrized by averaging
// with the transpose. Throws ResolutionError if rule.order < required_quadrature_order.
TMatrix assemble_T(const KernelSpec& kernel, const BasisId& basis, int M, const QuadratureRule& rule);

// Same, with a rule 32 nodes above the required order.
TMatrix assemble_T(const KernelSpec& kernel, const BasisId& basis, int M);

// Independent route for the sinc kernel in the normalized Legendre basis:
//   T(k, j) = 2 Re(i^{k-j}) sqrt((k+1/2)(j+1/2)) int_{-1}^{1} j_k(c s) j_j(c s) ds   (0-based k, j)
// from the plane-wave expansion of sinc and int P_k(t) e^{-ivt} dt = 2 (-i)^k j_k(v).
// The s-integral is done by adaptive Gauss-Kronrod to 1e-13. Requires M <= 200.
TMatrix assemble_T_sinc_oracle(double c, int M);

struct TailNorm {
  double value = 0.0;           // sqrt of the sum of squared coefficients outside the M x M block
  int M_big = 0;                // truncation level of the computed coefficient array
  double rounding_bound = 0.0;  // a-priori floating-point error bound on value
};

// ||r_M||_{L^2([-1,1]^2)} approximated from the M_big x M_big coefficient array.
// Returns zero when M >= M_big. Otherwise requires M_big >= 2M and, for the sinc
// kernel, M_big >= landau_widom_M(c, 12); throws ResolutionError if not.
TailNorm residual_tail_norm(const KernelSpec& kernel, const BasisId& basis, int M, int M_big,
                            const QuadratureRule& rule);

}  // namespace krm
