#pragma once

// Data-parallel inner loops. Every kernel has a plain serial reference in
// krm::kernels::serial and an OpenMP version in krm::kernels::omp; the library
// calls the OpenMP versions, the tests hold them against the serial ones and
// bench/ times both.
//
// The OpenMP versions are deterministic: each output entry is produced by exactly
// one thread with a fixed operation order, and reductions combine per-column
// partials in column order, so results do not depend on the thread count.

#include <Eigen/Dense>
#include <span>

#include "krm/basis.hpp"
#include "krm/kernel.hpp"
#include "krm/quadrature.hpp"

namespace krm::kernels {

namespace serial {

// K(i, j) = f(xs[i], xs[j]); upper triangle evaluated, lower mirrored.
Eigen::MatrixXd fill_symmetric(const KernelSpec& f, std::span<const double> xs);

// Row i holds phi_0..phi_{M-1} at xs[i]. No domain check.
Eigen::MatrixXd basis_rows(const BasisId& basis, int M, std::span<const double> xs);

// T(m, n) = sum_i sum_j w_i w_j f(x_i, x_j) Phi(i, m) Phi(j, n), literally as a
// quadruple loop. O(M^2 K^2); kept for checking the fast path on small sizes.
Eigen::MatrixXd galerkin(const KernelSpec& f, const Eigen::MatrixXd& phi, const QuadratureRule& rule);

// sqrt(sum of squares) with Neumaier-compensated accumulation in storage order.
double frobenius_norm(const Eigen::MatrixXd& a);

}  // namespace serial

namespace omp {

Eigen::MatrixXd fill_symmetric(const KernelSpec& f, std::span<const double> xs);
Eigen::MatrixXd basis_rows(const BasisId& basis, int M, std::span<const double> xs);

// (W Phi)^T F (W Phi) with F filled in parallel and the products done by Eigen.
Eigen::MatrixXd galerkin(const KernelSpec& f, const Eigen::MatrixXd& phi, const QuadratureRule& rule);

double frobenius_norm(const Eigen::MatrixXd& a);

}  // namespace omp

}  // namespace krm::kernels
