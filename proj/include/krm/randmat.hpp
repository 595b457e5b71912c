#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "krm/basis.hpp"
#include "krm/galerkin.hpp"
#include "krm/kernel.hpp"

namespace krm {

enum class Distribution { Uniform };  // uniform on [-1, 1], density 1/2

std::string to_string(Distribution d);

// Density of the sampling law on [-1, 1].
double sampling_density(Distribution d);

struct SampleSet {
  int N = 0;
  std::vector<double> xs;
  std::uint64_t seed = 0;
  Distribution distribution = Distribution::Uniform;
};

// N i.i.d. draws using CounterRng (see rng.hpp); xs[i] depends only on (seed, i).
SampleSet draw_samples(int N, Distribution distribution, std::uint64_t seed);

struct KernelMatrix {
  Eigen::MatrixXd entries;  // exactly symmetric
  KernelSpec kernel = KernelSpec::sinc(1.0);
  SampleSet samples;
  int N() const { return static_cast<int>(entries.rows()); }
};

KernelMatrix build_A(const KernelSpec& kernel, const SampleSet& samples);

struct DesignMatrix {
  Eigen::MatrixXd entries;  // N x M, row i = basis at X_i
  BasisId basis;
  int M() const { return static_cast<int>(entries.cols()); }
};

DesignMatrix build_H(const BasisId& basis, int M, const SampleSet& samples);

struct EstimatorMatrix {
  Eigen::MatrixXd entries;
  int M = 0;
  BasisId basis;
  int N() const { return static_cast<int>(entries.rows()); }
};

// H T H^T, symmetrized. Throws DimensionError on a column/size or basis mismatch and
// NumericalError if the product departs from symmetry by more than 1e-12 (relative).
// Forms an N x N matrix; for large N use estimator_nonzero_eigenvalues.
EstimatorMatrix build_estimator(const DesignMatrix& H, const TMatrix& T);

struct Residual {
  Eigen::MatrixXd matrix;  // A - Ã
  double hs_norm = 0.0;
};

Residual hs_residual(const KernelMatrix& A, const EstimatorMatrix& estimator);

// A-priori bound on the floating-point error of the computed ||A - Ã||_HS: the
// triple-product rounding, the propagated T entry error, and the rounding of A.
double hs_residual_rounding_bound(const KernelMatrix& A, const DesignMatrix& H, const TMatrix& T);

// G_M = H_M H_M^T, with H_M the first M rows of H. Throws DimensionError if H has fewer rows.
Eigen::MatrixXd gram_truncated(const DesignMatrix& H, int M);

// The M potentially nonzero eigenvalues of H T H^T, largest first, computed as the
// eigenvalues of T^{1/2} H^T H T^{1/2} (M x M) without forming the N x N product.
std::vector<double> estimator_nonzero_eigenvalues(const DesignMatrix& H, const TMatrix& T);

// E[h(X) h(X)^T] for h = (phi_0..phi_{M-1}) under the sampling law, by Gauss quadrature.
// For the normalized Legendre basis and the uniform law this is I/2.
Eigen::MatrixXd sampling_moment_matrix(const BasisId& basis, int M, Distribution distribution);

// Almost-sure limit of the nonzero eigenvalues of Ã/N: eig(T^{1/2} G T^{1/2}) with
// G the sampling moment matrix. Largest first.
std::vector<double> estimator_limit_spectrum(const TMatrix& T, const Eigen::MatrixXd& moment);

}  // namespace krm
