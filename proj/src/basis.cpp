#include "krm/basis.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "krm/errors.hpp"
#include "krm/kernels.hpp"

namespace krm {

namespace {

// Mantissa rescaling threshold for the Hermite recurrence.
constexpr double kRescale = 1e200;
const double kLogRescale = std::log(kRescale);

double scaled_value(double mantissa, double log_scale) {
  const double scale = std::exp(log_scale);
  if (std::isnormal(scale)) return mantissa * scale;
  if (mantissa == 0.0) return 0.0;
  return std::copysign(std::exp(std::log(std::abs(mantissa)) + log_scale), mantissa);
}

void require_bandwidth(double c) {
  if (!(c > 0.0) || !std::isfinite(c)) throw DomainError("basis bandwidth must be a positive finite number");
}

}  // namespace

BasisId BasisId::scaled_hermite(double c) {
  require_bandwidth(c);
  return {BasisKind::ScaledHermite, c};
}

BasisId BasisId::prolate(double c) {
  require_bandwidth(c);
  return {BasisKind::Prolate, c};
}

std::string BasisId::name() const {
  switch (kind) {
    case BasisKind::LegendreNormalized:
      return "legendre";
    case BasisKind::ScaledHermite:
      return "hermite";
    case BasisKind::Prolate:
      return "pswf";
  }
  return "unknown";
}

double clamp_to_interval(double x) {
  if (std::isnan(x)) throw DomainError("NaN abscissa");
  if (x > 1.0) {
    if (x - 1.0 > kDomainSlack) throw DomainError("abscissa " + std::to_string(x) + " outside [-1, 1]");
    return 1.0;
  }
  if (x < -1.0) {
    if (-1.0 - x > kDomainSlack) throw DomainError("abscissa " + std::to_string(x) + " outside [-1, 1]");
    return -1.0;
  }
  return x;
}

void legendre_norm_values(double x, std::span<double> out) {
  const std::size_t n = out.size();
  if (n == 0) return;
  double p_prev = 0.0;
  double p = 1.0;
  out[0] = std::sqrt(0.5);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const double kd = static_cast<double>(k);
    const double p_next = ((2.0 * kd + 1.0) * x * p - kd * p_prev) / (kd + 1.0);
    p_prev = p;
    p = p_next;
    out[k + 1] = std::sqrt(kd + 1.5) * p;
  }
}

double legendre_norm_eval(int n, double x) {
  if (n < 0) throw DomainError("Legendre degree must be nonnegative");
  x = clamp_to_interval(x);
  std::vector<double> values(static_cast<std::size_t>(n) + 1);
  legendre_norm_values(x, values);
  return values.back();
}

void hermite_scaled_values(double c, double t, std::span<double> out) {
  const std::size_t n = out.size();
  if (n == 0) return;
  const double x = std::sqrt(c) * t;
  // value_k = mantissa_k * exp(log_scale)
  double log_scale = 0.25 * std::log(c) - 0.25 * std::log(std::numbers::pi) - 0.5 * x * x;
  double p_prev = 0.0;
  double p = 1.0;
  out[0] = scaled_value(1.0, log_scale);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const double kd = static_cast<double>(k);
    double p_next = x * std::sqrt(2.0 / (kd + 1.0)) * p - std::sqrt(kd / (kd + 1.0)) * p_prev;
    if (std::abs(p_next) > kRescale) {
      p_next /= kRescale;
      p /= kRescale;
      log_scale += kLogRescale;
    }
    p_prev = p;
    p = p_next;
    out[k + 1] = scaled_value(p, log_scale);
  }
}

double hermite_scaled_eval(int n, double c, double t) {
  if (n < 0) throw DomainError("Hermite index must be nonnegative");
  require_bandwidth(c);
  if (!std::isfinite(t)) throw DomainError("non-finite abscissa");
  std::vector<double> values(static_cast<std::size_t>(n) + 1);
  hermite_scaled_values(c, t, values);
  return values.back();
}

void basis_values(const BasisId& basis, double x, std::span<double> out) {
  switch (basis.kind) {
    case BasisKind::LegendreNormalized:
      legendre_norm_values(x, out);
      return;
    case BasisKind::ScaledHermite:
      hermite_scaled_values(basis.bandwidth, x, out);
      return;
    case BasisKind::Prolate:
      throw DomainError("the prolate basis is evaluated through a PswfSet");
  }
}

Eigen::MatrixXd eval_matrix(const BasisId& basis, int M, std::span<const double> xs) {
  if (M < 1) throw DomainError("basis size M must be at least 1");
  if (basis.kind == BasisKind::Prolate) throw DomainError("the prolate basis is evaluated through a PswfSet");
  std::vector<double> clamped(xs.begin(), xs.end());
  for (double& x : clamped) x = clamp_to_interval(x);
  return kernels::omp::basis_rows(basis, M, clamped);
}

}  // namespace krm
