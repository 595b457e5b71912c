#pragma once

#include <vector>

namespace krm {

struct QuadratureRule {
  std::vector<double> nodes;    // strictly increasing, symmetric about the midpoint
  std::vector<double> weights;  // positive
  int order = 0;                // number of nodes K
};

inline constexpr int kMaxGaussOrder = 5000;

// K-node Gauss-Legendre rule on [-1, 1]. Roots of P_K by Newton iteration from
// Chebyshev initial guesses; the rule is built on one half and mirrored.
QuadratureRule gauss_legendre_rule(int K);

// The same rule affinely mapped to [a, b].
QuadratureRule gauss_legendre_rule(int K, double a, double b);

}  // namespace krm
