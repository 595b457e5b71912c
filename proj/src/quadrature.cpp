#include "krm/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "krm/errors.hpp"

namespace krm {

namespace {

// P_K(x) and P_K'(x) by the three-term recurrence.
std::pair<double, double> legendre_with_derivative(int K, double x) {
  double p_prev = 1.0;
  double p = x;
  for (int k = 1; k < K; ++k) {
    const double p_next = ((2.0 * k + 1.0) * x * p - k * p_prev) / (k + 1.0);
    p_prev = p;
    p = p_next;
  }
  const double dp = K * (x * p - p_prev) / (x * x - 1.0);
  return {p, dp};
}

}  // namespace

QuadratureRule gauss_legendre_rule(int K) {
  if (K < 1 || K > kMaxGaussOrder) {
    throw DomainError("Gauss-Legendre order must lie in [1, " + std::to_string(kMaxGaussOrder) + "]");
  }
  QuadratureRule rule;
  rule.order = K;
  rule.nodes.assign(K, 0.0);
  rule.weights.assign(K, 0.0);
  if (K == 1) {
    rule.weights[0] = 2.0;
    return rule;
  }

  const int half = K / 2;
  for (int i = 0; i < half; ++i) {
    // i-th largest root
    double x = std::cos(std::numbers::pi * (i + 0.75) / (K + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      auto [p, d] = legendre_with_derivative(K, x);
      const double dx = p / d;
      x -= dx;
      dp = d;
      if (std::abs(dx) <= 1e-15) break;
    }
    dp = legendre_with_derivative(K, x).second;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[K - 1 - i] = x;
    rule.nodes[i] = -x;
    rule.weights[K - 1 - i] = w;
    rule.weights[i] = w;
  }
  if (K % 2 == 1) {
    const double dp = legendre_with_derivative(K, 0.0).second;
    rule.nodes[half] = 0.0;
    rule.weights[half] = 2.0 / (dp * dp);
  }
  return rule;
}

QuadratureRule gauss_legendre_rule(int K, double a, double b) {
  QuadratureRule rule = gauss_legendre_rule(K);
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  for (int i = 0; i < K; ++i) {
    rule.nodes[i] = mid + half * rule.nodes[i];
    rule.weights[i] *= half;
  }
  return rule;
}

}  // namespace krm
