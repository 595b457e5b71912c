#include "krm/pswf.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <string>

#include "krm/bounds.hpp"
#include "krm/errors.hpp"
#include "krm/kernels.hpp"

namespace krm {

namespace {

constexpr int kPollutedTail = 10;
constexpr double kLambdaFloor = std::numeric_limits<double>::min();
const double kLambdaCeil = std::nextafter(1.0, 0.0);

bool grid_is_symmetric_even(const QuadratureRule& grid) {
  const int K = grid.order;
  if (K % 2 != 0) return false;
  for (int i = 0; i < K / 2; ++i) {
    if (grid.nodes[i] != -grid.nodes[K - 1 - i] || grid.weights[i] != grid.weights[K - 1 - i]) return false;
  }
  return true;
}

Eigen::VectorXd eigenvalues_of(const Eigen::MatrixXd& a) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericalError("Nystrom eigen-solve failed");
  return solver.eigenvalues();
}

}  // namespace

PswfSet pswf_solve(double c, int M) {
  if (!(c > 0.0)) throw DomainError("PSWF bandwidth must be positive");
  const int needed = std::max(landau_widom_M(c, 8.0), kPollutedTail + 1);
  if (M < needed) {
    throw ResolutionError("pswf_solve needs M >= " + std::to_string(needed) + " to resolve the plunge region");
  }

  const TMatrix t = assemble_T(KernelSpec::sinc(c), BasisId::legendre(), M);

  // T_M decouples into even- and odd-degree blocks and psi_n has the parity of n, so each
  // block is solved on its own and the results interleave. Near-1 ties across parities
  // (large c) then cannot mix the eigenvectors.
  std::vector<double> lambdas(M);
  Eigen::MatrixXd vectors = Eigen::MatrixXd::Zero(M, M);
  for (int parity = 0; parity < 2; ++parity) {
    const int size = (M - parity + 1) / 2;
    Eigen::MatrixXd block(size, size);
    for (int a = 0; a < size; ++a)
      for (int b = 0; b < size; ++b) block(a, b) = t.entries(2 * a + parity, 2 * b + parity);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(block);
    if (solver.info() != Eigen::Success) throw NumericalError("PSWF eigen-solve failed");
    // Eigen returns ascending order.
    for (int j = 0; j < size; ++j) {
      const int n = 2 * j + parity;
      const int src = size - 1 - j;
      lambdas[n] = std::clamp(c / std::numbers::pi * solver.eigenvalues()(src), kLambdaFloor, kLambdaCeil);
      Eigen::VectorXd v = solver.eigenvectors().col(src);
      Eigen::Index pivot = 0;
      v.cwiseAbs().maxCoeff(&pivot);
      if (v(pivot) < 0.0) v = -v;
      for (int a = 0; a < size; ++a) vectors(2 * a + parity, n) = v(a);
    }
  }

  int count = M - kPollutedTail;
  for (int n = 0; n < count; ++n) {
    const bool at_floor = lambdas[n] <= kLambdaFloor;
    // Ties near 1 are saturation of the double format, not loss of resolution.
    const bool stalled = n > 0 && lambdas[n] >= lambdas[n - 1] && lambdas[n - 1] < 0.5;
    if (at_floor || stalled) {
      count = n;
      break;
    }
  }

  PswfSet set;
  set.c = c;
  set.M = M;
  set.count = count;
  set.lambdas.assign(lambdas.begin(), lambdas.begin() + count);
  set.coeffs = vectors.leftCols(count);
  return set;
}

double pswf_eval(const PswfSet& set, int n, double x) {
  if (n < 0 || n >= set.count) throw DomainError("PSWF index " + std::to_string(n) + " out of range");
  x = clamp_to_interval(x);
  std::vector<double> p(set.M);
  legendre_norm_values(x, p);
  double sum = 0.0;
  for (int k = 0; k < set.M; ++k) sum += set.coeffs(k, n) * p[k];
  return sum;
}

Eigen::MatrixXd pswf_eval_matrix(const PswfSet& set, int m, std::span<const double> xs) {
  if (m < 1 || m > set.count) throw DomainError("requested PSWF count exceeds the exposed set");
  const Eigen::MatrixXd legendre = eval_matrix(BasisId::legendre(), set.M, xs);
  return legendre * set.coeffs.leftCols(m);
}

TMatrix pswf_T(const PswfSet& set, int m) {
  if (m < 1 || m > set.count) throw DomainError("requested PSWF count exceeds the exposed set");
  TMatrix t;
  t.M = m;
  t.basis = BasisId::prolate(set.c);
  t.kernel = KernelSpec::sinc(set.c);
  t.entries = Eigen::MatrixXd::Zero(m, m);
  for (int n = 0; n < m; ++n) t.entries(n, n) = std::numbers::pi / set.c * set.lambdas[n];
  t.entry_error_bound = 2.0 * set.M * std::numeric_limits<double>::epsilon() * std::numbers::pi / set.c;
  return t;
}

std::vector<double> nystrom_sinc_eigenvalues(double c, const QuadratureRule& grid, int how_many) {
  if (!(c > 0.0)) throw DomainError("sinc bandwidth must be positive");
  const double scale = c / std::numbers::pi;
  auto kc = [&](double x, double y) { return scale * sinc_eval(c, x - y); };

  std::vector<double> values;
  if (grid_is_symmetric_even(grid)) {
    const int h = grid.order / 2;
    Eigen::MatrixXd even(h, h);
    Eigen::MatrixXd odd(h, h);
#pragma omp parallel for schedule(static)
    for (int i = 0; i < h; ++i) {
      const double xi = grid.nodes[h + i];
      const double wi = std::sqrt(grid.weights[h + i]);
      for (int j = 0; j < h; ++j) {
        const double xj = grid.nodes[h + j];
        const double wj = std::sqrt(grid.weights[h + j]);
        const double direct = kc(xi, xj);
        const double mirrored = kc(xi, -xj);
        even(i, j) = wi * (direct + mirrored) * wj;
        odd(i, j) = wi * (direct - mirrored) * wj;
      }
    }
    for (const Eigen::MatrixXd* block : {&even, &odd}) {
      const Eigen::VectorXd ev = eigenvalues_of(*block);
      values.insert(values.end(), ev.data(), ev.data() + ev.size());
    }
  } else {
    const int K = grid.order;
    Eigen::MatrixXd full(K, K);
#pragma omp parallel for schedule(static)
    for (int i = 0; i < K; ++i) {
      for (int j = 0; j < K; ++j) {
        full(i, j) = std::sqrt(grid.weights[i]) * kc(grid.nodes[i], grid.nodes[j]) * std::sqrt(grid.weights[j]);
      }
    }
    const Eigen::VectorXd ev = eigenvalues_of(full);
    values.assign(ev.data(), ev.data() + ev.size());
  }
  std::sort(values.begin(), values.end(), std::greater<>());
  if (how_many < static_cast<int>(values.size())) values.resize(std::max(how_many, 0));
  return values;
}

}  // namespace krm
