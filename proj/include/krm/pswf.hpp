#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "krm/galerkin.hpp"
#include "krm/quadrature.hpp"

namespace krm {

// Prolate spheroidal wave functions psi_{n,c} on [-1, 1] and the eigenvalues
// lambda_n(c) of the time-frequency limiting operator with kernel sin(c(x-y))/(pi(x-y)).
struct PswfSet {
  double c = 0.0;
  int M = 0;                    // size of the Legendre Galerkin matrix that was diagonalized
  int count = 0;                // exposed eigenpairs
  std::vector<double> lambdas;  // decreasing, clipped to (eps, 1 - eps)
  Eigen::MatrixXd coeffs;       // M x count; column n = normalized-Legendre coefficients of psi_n
};

// Diagonalizes the even- and odd-degree blocks of the Legendre-basis T_M of the sinc kernel;
// psi_n is taken from the block matching the parity of n. lambda_n = (c/pi) * eig_n.
// Eigenvector signs are fixed so the largest-magnitude coefficient is positive.
// At most M - 10 pairs are exposed; the exposed tail is cut further where the
// eigenvalues reach the round-off floor and stop decreasing strictly.
// Requires M >= max(landau_widom_M(c, 8), 11); throws ResolutionError otherwise.
PswfSet pswf_solve(double c, int M);

// sum_k coeffs(k, n) P~_k(x).
double pswf_eval(const PswfSet& set, int n, double x);

/// N x m matrix with entry (i, n) = psi_n(xs[i]), n < m <= set.count.
Eigen::MatrixXd pswf_eval_matrix(const PswfSet& set, int m, std::span<const double> xs);

// diag((pi/c) lambda_0, ..., (pi/c) lambda_{m-1}): T_m in the PSWF basis.
TMatrix pswf_T(const PswfSet& set, int m);

// Nystrom discretization of the Fredholm problem on the given grid: eigenvalues of
// W^{1/2} K_c W^{1/2}, largest first, first `how_many` returned. A grid symmetric
// about 0 with an even number of nodes is split into even and odd parity blocks.
std::vector<double> nystrom_sinc_eigenvalues(double c, const QuadratureRule& grid, int how_many);

}  // namespace krm
