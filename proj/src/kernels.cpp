#include "krm/kernels.hpp"

#include <cmath>
#include <vector>

namespace krm::kernels {

namespace {

// Neumaier-compensated running sum.
struct CompensatedSum {
  double sum = 0.0;
  double comp = 0.0;

  void add(double t) {
    const double s = sum + t;
    if (std::abs(sum) >= std::abs(t)) {
      comp += (sum - s) + t;
    } else {
      comp += (t - s) + sum;
    }
    sum = s;
  }
  double value() const { return sum + comp; }
};

void fill_row(const KernelSpec& f, std::span<const double> xs, Eigen::Index i, Eigen::MatrixXd& out) {
  const Eigen::Index n = static_cast<Eigen::Index>(xs.size());
  for (Eigen::Index j = i; j < n; ++j) out(i, j) = f(xs[i], xs[j]);
}

void mirror_upper(Eigen::MatrixXd& a) {
  const Eigen::Index n = a.rows();
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = j + 1; i < n; ++i) a(i, j) = a(j, i);
  }
}

}  // namespace

namespace serial {

Eigen::MatrixXd fill_symmetric(const KernelSpec& f, std::span<const double> xs) {
  const Eigen::Index n = static_cast<Eigen::Index>(xs.size());
  Eigen::MatrixXd out(n, n);
  for (Eigen::Index i = 0; i < n; ++i) fill_row(f, xs, i, out);
  mirror_upper(out);
  return out;
}

Eigen::MatrixXd basis_rows(const BasisId& basis, int M, std::span<const double> xs) {
  const Eigen::Index n = static_cast<Eigen::Index>(xs.size());
  Eigen::MatrixXd out(n, M);
  std::vector<double> row(M);
  for (Eigen::Index i = 0; i < n; ++i) {
    basis_values(basis, xs[i], row);
    for (int m = 0; m < M; ++m) out(i, m) = row[m];
  }
  return out;
}

Eigen::MatrixXd galerkin(const KernelSpec& f, const Eigen::MatrixXd& phi, const QuadratureRule& rule) {
  const int K = rule.order;
  const Eigen::Index M = phi.cols();
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(M, M);
  for (Eigen::Index m = 0; m < M; ++m) {
    for (Eigen::Index n = 0; n < M; ++n) {
      double outer = 0.0;
      for (int i = 0; i < K; ++i) {
        double inner = 0.0;
        for (int j = 0; j < K; ++j) inner += rule.weights[j] * f(rule.nodes[i], rule.nodes[j]) * phi(j, n);
        outer += rule.weights[i] * phi(i, m) * inner;
      }
      t(m, n) = outer;
    }
  }
  return t;
}

double frobenius_norm(const Eigen::MatrixXd& a) {
  CompensatedSum acc;
  const double* data = a.data();
  for (Eigen::Index k = 0; k < a.size(); ++k) acc.add(data[k] * data[k]);
  return std::sqrt(acc.value());
}

}  // namespace serial

namespace omp {

Eigen::MatrixXd fill_symmetric(const KernelSpec& f, std::span<const double> xs) {
  const Eigen::Index n = static_cast<Eigen::Index>(xs.size());
  Eigen::MatrixXd out(n, n);
#pragma omp parallel for schedule(dynamic, 16)
  for (Eigen::Index i = 0; i < n; ++i) fill_row(f, xs, i, out);
  mirror_upper(out);
  return out;
}

Eigen::MatrixXd basis_rows(const BasisId& basis, int M, std::span<const double> xs) {
  const Eigen::Index n = static_cast<Eigen::Index>(xs.size());
  Eigen::MatrixXd out(n, M);
#pragma omp parallel
  {
    std::vector<double> row(M);
#pragma omp for schedule(static)
    for (Eigen::Index i = 0; i < n; ++i) {
      basis_values(basis, xs[i], row);
      for (int m = 0; m < M; ++m) out(i, m) = row[m];
    }
  }
  return out;
}

Eigen::MatrixXd galerkin(const KernelSpec& f, const Eigen::MatrixXd& phi, const QuadratureRule& rule) {
  const Eigen::MatrixXd kmat = fill_symmetric(f, rule.nodes);
  const Eigen::Map<const Eigen::VectorXd> w(rule.weights.data(), rule.order);
  const Eigen::MatrixXd weighted = w.asDiagonal() * phi;
  return weighted.transpose() * (kmat * weighted);
}

double frobenius_norm(const Eigen::MatrixXd& a) {
  const Eigen::Index cols = a.cols();
  const Eigen::Index rows = a.rows();
  std::vector<CompensatedSum> partial(static_cast<std::size_t>(cols));
#pragma omp parallel for schedule(static)
  for (Eigen::Index j = 0; j < cols; ++j) {
    const double* col = a.data() + j * rows;
    for (Eigen::Index i = 0; i < rows; ++i) partial[j].add(col[i] * col[i]);
  }
  CompensatedSum total;
  for (const CompensatedSum& p : partial) {
    total.add(p.sum);
    total.add(p.comp);
  }
  return std::sqrt(total.value());
}

}  // namespace omp

}  // namespace krm::kernels
