#include "krm/kernel.hpp"

#include <cmath>
#include <numbers>
#include <utility>

#include "krm/errors.hpp"
#include "krm/quadrature.hpp"

namespace krm {

namespace {

// pi in four pieces; the first three carry 33 bits, so k * piece is exact for |k| < 2^20.
constexpr double kPi1 = 0x1.921fb544p+1;
constexpr double kPi2 = 0x1.0b4611a6p-33;
constexpr double kPi3 = 0x1.3198a2ep-68;
constexpr double kPi4 = 0x1.b839a252049c1p-103;
constexpr double kReduceLimit = 0x1p20;

}  // namespace

double sinc_eval(double c, double u) {
  const double x = c * u;
  if (std::abs(x) < 1e-4) {
    const double x2 = x * x;
    return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
  }
  // Exact low part of c*u; near the zeros of sin it is the same size as the result.
  const double lo = std::fma(c, u, -x);
  if (std::abs(x) < kReduceLimit) {
    const double k = std::nearbyint(x / std::numbers::pi);
    double r = (x - k * kPi1) - k * kPi2;
    r = ((r + lo) - k * kPi3) - k * kPi4;
    const double s = std::sin(r);
    return (std::fmod(k, 2.0) == 0.0 ? s : -s) / (x + lo);
  }
  return (std::sin(x) + lo * std::cos(x)) / (x + lo);
}

double sinc_l2_norm(double c) {
  if (!(c > 0.0)) throw DomainError("sinc bandwidth must be positive");
  const int K = std::max(64, static_cast<int>(std::ceil(4.0 * c)) + 40);
  const QuadratureRule rule = gauss_legendre_rule(K, 0.0, 2.0);
  double sum = 0.0;
  for (int i = 0; i < K; ++i) {
    const double u = rule.nodes[i];
    const double s = sinc_eval(c, u);
    sum += rule.weights[i] * (2.0 - u) * s * s;
  }
  return std::sqrt(2.0 * sum);
}

KernelSpec KernelSpec::sinc(double c) {
  if (!(c > 0.0) || !std::isfinite(c)) throw DomainError("sinc bandwidth must be a positive finite number");
  KernelSpec k;
  k.kind_ = KernelKind::Sinc;
  k.c_ = c;
  k.sup_bound_ = 1.0;
  k.l2_norm_ = sinc_l2_norm(c);
  k.name_ = "sinc";
  return k;
}

KernelSpec KernelSpec::custom(Function f, double sup_bound, double l2_norm, std::string name) {
  if (!f) throw DomainError("custom kernel needs a callable");
  if (!(sup_bound > 0.0) || !(l2_norm > 0.0)) {
    throw DomainError("custom kernel needs positive sup bound and L2 norm");
  }
  KernelSpec k;
  k.kind_ = KernelKind::Custom;
  k.sup_bound_ = sup_bound;
  k.l2_norm_ = l2_norm;
  k.name_ = std::move(name);
  k.fn_ = std::make_shared<const Function>(std::move(f));
  return k;
}

}  // namespace krm
