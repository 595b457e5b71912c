#include "krm/randmat.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "krm/errors.hpp"
#include "krm/kernels.hpp"
#include "krm/quadrature.hpp"
#include "krm/rng.hpp"

namespace krm {

namespace {

constexpr double kUnitRoundoff = std::numeric_limits<double>::epsilon() / 2.0;

// Symmetric square root of a PSD matrix; eigenvalues below zero (round-off) are dropped.
Eigen::MatrixXd psd_sqrt(const Eigen::MatrixXd& t) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(t);
  if (solver.info() != Eigen::Success) throw NumericalError("eigen-solve of T_M failed");
  const Eigen::VectorXd root = solver.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return solver.eigenvectors() * root.asDiagonal() * solver.eigenvectors().transpose();
}

std::vector<double> descending_eigenvalues(const Eigen::MatrixXd& sym) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericalError("eigen-solve failed");
  std::vector<double> values(solver.eigenvalues().data(), solver.eigenvalues().data() + sym.rows());
  std::reverse(values.begin(), values.end());
  return values;
}

std::vector<double> congruence_spectrum(const Eigen::MatrixXd& t, const Eigen::MatrixXd& middle) {
  const Eigen::MatrixXd root = psd_sqrt(t);
  Eigen::MatrixXd product = root * middle * root;
  product = 0.5 * (product + product.transpose()).eval();
  return descending_eigenvalues(product);
}

}  // namespace

std::string to_string(Distribution d) {
  switch (d) {
    case Distribution::Uniform:
      return "uniform";
  }
  return "unknown";
}

double sampling_density(Distribution d) {
  switch (d) {
    case Distribution::Uniform:
      return 0.5;
  }
  return 0.0;
}

SampleSet draw_samples(int N, Distribution distribution, std::uint64_t seed) {
  if (N < 1) throw DomainError("sample size N must be at least 1");
  SampleSet s;
  s.N = N;
  s.seed = seed;
  s.distribution = distribution;
  s.xs.resize(N);
  const CounterRng rng(seed);
  for (int i = 0; i < N; ++i) s.xs[i] = 2.0 * rng.uniform01(static_cast<std::uint64_t>(i)) - 1.0;
  return s;
}

KernelMatrix build_A(const KernelSpec& kernel, const SampleSet& samples) {
  KernelMatrix a;
  a.entries = kernels::omp::fill_symmetric(kernel, samples.xs);
  a.kernel = kernel;
  a.samples = samples;
  return a;
}

DesignMatrix build_H(const BasisId& basis, int M, const SampleSet& samples) {
  DesignMatrix h;
  h.entries = eval_matrix(basis, M, samples.xs);
  h.basis = basis;
  return h;
}

EstimatorMatrix build_estimator(const DesignMatrix& H, const TMatrix& T) {
  if (H.M() != T.M || T.entries.rows() != T.M) {
    throw DimensionError("H has " + std::to_string(H.M()) + " columns but T_M is " + std::to_string(T.M) + "x" +
                         std::to_string(T.M));
  }
  if (!(H.basis == T.basis)) throw DimensionError("H and T_M are expressed in different bases");

  Eigen::MatrixXd e = (H.entries * T.entries) * H.entries.transpose();
  const double scale = std::max(1.0, e.cwiseAbs().maxCoeff());
  const double departure = (e - e.transpose()).cwiseAbs().maxCoeff();
  if (departure > 1e-12 * scale) {
    throw NumericalError("H T H^T departs from symmetry by " + std::to_string(departure));
  }
  EstimatorMatrix out;
  out.entries = 0.5 * (e + e.transpose());
  out.M = T.M;
  out.basis = T.basis;
  return out;
}

Residual hs_residual(const KernelMatrix& A, const EstimatorMatrix& estimator) {
  if (A.N() != estimator.N()) throw DimensionError("A and the estimator differ in size");
  Residual r;
  r.matrix = A.entries - estimator.entries;
  r.hs_norm = kernels::omp::frobenius_norm(r.matrix);
  return r;
}

double hs_residual_rounding_bound(const KernelMatrix& A, const DesignMatrix& H, const TMatrix& T) {
  if (A.N() != H.entries.rows() || H.M() != T.M) throw DimensionError("inconsistent A, H, T_M sizes");
  const double gamma = (4.0 * T.M + 8.0) * kUnitRoundoff;
  const Eigen::MatrixXd abs_h = H.entries.cwiseAbs();
  const Eigen::MatrixXd magnitude = abs_h * T.entries.cwiseAbs() * abs_h.transpose();
  const Eigen::VectorXd row_l1 = abs_h.rowwise().sum();
  const Eigen::MatrixXd propagated = T.entry_error_bound * (row_l1 * row_l1.transpose());
  const Eigen::MatrixXd entry_bound =
      gamma * magnitude + propagated + 2.0 * kUnitRoundoff * (A.entries.cwiseAbs() + magnitude);
  return kernels::omp::frobenius_norm(entry_bound);
}

Eigen::MatrixXd gram_truncated(const DesignMatrix& H, int M) {
  if (M < 1 || M > H.entries.rows()) {
    throw DimensionError("gram_truncated needs at least M=" + std::to_string(M) + " rows");
  }
  const Eigen::MatrixXd top = H.entries.topRows(M);
  Eigen::MatrixXd g = top * top.transpose();
  return 0.5 * (g + g.transpose());
}

std::vector<double> estimator_nonzero_eigenvalues(const DesignMatrix& H, const TMatrix& T) {
  if (H.M() != T.M) throw DimensionError("H column count differs from T_M size");
  const Eigen::MatrixXd gram = H.entries.transpose() * H.entries;
  return congruence_spectrum(T.entries, gram);
}

Eigen::MatrixXd sampling_moment_matrix(const BasisId& basis, int M, Distribution distribution) {
  if (basis.kind == BasisKind::Prolate) throw DomainError("moment matrix of the prolate basis needs a PswfSet");
  int order = 2 * M + 8;
  if (basis.kind == BasisKind::ScaledHermite) {
    order = std::max(order, static_cast<int>(std::ceil(std::exp(1.0) * basis.bandwidth)) + 40);
  }
  const QuadratureRule rule = gauss_legendre_rule(std::min(order, kMaxGaussOrder));
  const Eigen::MatrixXd phi = kernels::omp::basis_rows(basis, M, rule.nodes);
  const Eigen::Map<const Eigen::VectorXd> w(rule.weights.data(), rule.order);
  Eigen::MatrixXd g = sampling_density(distribution) * (phi.transpose() * w.asDiagonal() * phi);
  return 0.5 * (g + g.transpose());
}

std::vector<double> estimator_limit_spectrum(const TMatrix& T, const Eigen::MatrixXd& moment) {
  if (moment.rows() != T.M || moment.cols() != T.M) throw DimensionError("moment matrix size differs from T_M");
  return congruence_spectrum(T.entries, moment);
}

}  // namespace krm
