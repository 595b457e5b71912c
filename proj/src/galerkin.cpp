#include "krm/galerkin.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/bessel.hpp>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "krm/bounds.hpp"
#include "krm/errors.hpp"
#include "krm/kernels.hpp"

namespace krm {

namespace {

constexpr double kUnitRoundoff = std::numeric_limits<double>::epsilon() / 2.0;

int bandwidth_order(double c) { return static_cast<int>(std::ceil(std::numbers::e * c)) + 20; }

}  // namespace

int required_quadrature_order(const KernelSpec& kernel, const BasisId& basis, int M) {
  int order = 2 * M;
  if (kernel.is_sinc()) order = std::max(order, bandwidth_order(kernel.bandwidth()));
  if (basis.kind == BasisKind::ScaledHermite) order = std::max(order, bandwidth_order(basis.bandwidth));
  return order;
}

TMatrix assemble_T(const KernelSpec& kernel, const BasisId& basis, int M, const QuadratureRule& rule) {
  if (M < 1) throw DomainError("T_M needs M >= 1");
  if (basis.kind == BasisKind::Prolate) throw DomainError("use pswf_T for the prolate basis");
  const int required = required_quadrature_order(kernel, basis, M);
  if (rule.order < required) {
    throw ResolutionError("quadrature order " + std::to_string(rule.order) + " below the required " +
                          std::to_string(required) + " for M=" + std::to_string(M));
  }

  const Eigen::MatrixXd phi = kernels::omp::basis_rows(basis, M, rule.nodes);
  Eigen::MatrixXd t = kernels::omp::galerkin(kernel, phi, rule);

  const double scale = std::max(1.0, t.cwiseAbs().maxCoeff());
  const double departure = (t - t.transpose()).cwiseAbs().maxCoeff();
  if (departure > 1e-12 * scale) {
    throw NumericalError("assembled T_M departs from symmetry by " + std::to_string(departure));
  }
  t = 0.5 * (t + t.transpose()).eval();

  // |W Phi|^T |F| |W Phi| bounds the magnitude of every summand of an entry.
  const Eigen::Map<const Eigen::VectorXd> w(rule.weights.data(), rule.order);
  const Eigen::MatrixXd abs_weighted = (w.asDiagonal() * phi).cwiseAbs();
  const Eigen::MatrixXd abs_kernel = kernels::omp::fill_symmetric(kernel, rule.nodes).cwiseAbs();
  const Eigen::MatrixXd magnitude = abs_weighted.transpose() * (abs_kernel * abs_weighted);
  const double gamma = (2.0 * rule.order + 4.0 * M + 10.0) * kUnitRoundoff;

  TMatrix out;
  out.M = M;
  out.basis = basis;
  out.entries = std::move(t);
  out.kernel = kernel;
  out.entry_error_bound = gamma * magnitude.maxCoeff();
  return out;
}

TMatrix assemble_T(const KernelSpec& kernel, const BasisId& basis, int M) {
  const int order = std::min(kMaxGaussOrder, required_quadrature_order(kernel, basis, M) + 32);
  return assemble_T(kernel, basis, M, gauss_legendre_rule(order));
}

TMatrix assemble_T_sinc_oracle(double c, int M) {
  if (!(c > 0.0)) throw DomainError("sinc bandwidth must be positive");
  if (M < 1 || M > 200) throw DomainError("oracle supports 1 <= M <= 200");

  using boost::math::quadrature::gauss_kronrod;
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(M, M);
  for (int a = 0; a < M; ++a) {
    for (int b = a % 2; b <= a; b += 2) {
      auto integrand = [&](double s) {
        return boost::math::sph_bessel(a, c * s) * boost::math::sph_bessel(b, c * s);
      };
      // even integrand: int_{-1}^{1} = 2 int_0^1
      const double half = gauss_kronrod<double, 31>::integrate(integrand, 0.0, 1.0, 15, 1e-13);
      const double sign = ((a - b) / 2) % 2 == 0 ? 1.0 : -1.0;
      const double value = 2.0 * sign * std::sqrt((a + 0.5) * (b + 0.5)) * 2.0 * half;
      t(a, b) = value;
      t(b, a) = value;
    }
  }
  TMatrix out;
  out.M = M;
  out.basis = BasisId::legendre();
  out.entries = std::move(t);
  out.kernel = KernelSpec::sinc(c);
  out.entry_error_bound = 0.0;
  return out;
}

TailNorm residual_tail_norm(const KernelSpec& kernel, const BasisId& basis, int M, int M_big,
                            const QuadratureRule& rule) {
  if (M < 0) throw DomainError("M must be nonnegative");
  if (M >= M_big) return {0.0, M_big, 0.0};
  if (M_big < 2 * M) throw ResolutionError("residual_tail_norm needs M_big >= 2M");
  if (kernel.is_sinc() && M_big < landau_widom_M(kernel.bandwidth(), 12.0)) {
    throw ResolutionError("residual_tail_norm needs M_big >= landau_widom_M(c, 12) = " +
                          std::to_string(landau_widom_M(kernel.bandwidth(), 12.0)));
  }
  const TMatrix big = assemble_T(kernel, basis, M_big, rule);

  double sum = 0.0;
  double comp = 0.0;
  long outside = 0;
  for (int l = 0; l < M_big; ++l) {
    for (int k = 0; k < M_big; ++k) {
      if (k < M && l < M) continue;
      const double term = big.entries(k, l) * big.entries(k, l);
      const double s = sum + term;
      comp += std::abs(sum) >= term ? (sum - s) + term : (term - s) + sum;
      sum = s;
      ++outside;
    }
  }
  TailNorm out;
  out.value = std::sqrt(sum + comp);
  out.M_big = M_big;
  out.rounding_bound = std::sqrt(static_cast<double>(outside)) * big.entry_error_bound;
  return out;
}

}  // namespace krm
