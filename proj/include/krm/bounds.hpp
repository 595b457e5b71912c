#pragma once

// Closed-form error and probability bounds for kernel random matrices, evaluated
// in log space. A report whose domain condition fails is returned with valid=false
// rather than thrown.

#include <string>
#include <utility>
#include <vector>

namespace krm {

using NamedValues = std::vector<std::pair<std::string, double>>;

struct BoundReport {
  std::string name;
  double value = 0.0;      // bound or probability; meaningless when !valid
  double log_value = 0.0;  // always finite; lowest() stands in for log(0)
  bool valid = false;
  NamedValues inputs;
  NamedValues extras;      // auxiliary quantities (thresholds, D, ...)

  // Looks up an extra by name; throws std::out_of_range if absent.
  double extra(const std::string& key) const;
};

// b = 2 sqrt(pi) e^{-3/2} / sqrt(3).
double truncation_constant_b();

// (b / c) (ec/2M)^{M+3/2} (1 - (ec/2M)^2)^{-1/2} ||f||; valid iff M > ec/2.
BoundReport bound_rM(double c, int M, double norm_f);

// N (M + 1) * bound_rM(c, M, norm_f).
BoundReport bound_expected_R(int N, int M, double c, double norm_f);

// D = 64 pi B^2 / (3 e^3 c^2) (ec/2M)^{2M+3} [(M+1)(2N-1) / (1 - ec/2M)]^2 and the
// probability max(0, 1 - 2 exp(-2 eps^2 / D)). value is the probability; extras hold D and log D.
BoundReport mcdiarmid_probability(double eps, double c, int M, int N, double B);

// R_l(c) = (2c)^{l-1} e^{-c} / (sqrt(pi c) (l-1)!), through lgamma. Requires l >= 1.
BoundReport hermite_tail_R(int l, double c);

// log R_l(c) extended to l = 0 through 1/Gamma(0) = 0, i.e. R_0(c) = 0.
double log_hermite_tail(int l, double c);

// 34 c^{3/2} / sqrt(2n + 1) * ||f||.
BoundReport hermite_L2_err(double c, int n, double norm_f);

struct ChernoffReport {
  BoundReport min;  // value: P(lambda_min(G_M) >= threshold) lower bound; extras: threshold, R
  BoundReport max;  // value: P(lambda_max(G_M) <= threshold) lower bound; extras: threshold, R
};

// Matrix-Chernoff thresholds and probability bounds for G_M = H_M H_M^T in the
// scaled-Hermite basis, with L(c, M) = M (c pi)^{1/4} e^{-c/2}. Requires delta in (0, 1].
ChernoffReport chernoff_bounds(double c, int M, double delta);

// max(4, ceil(2c/pi + alpha log(max(c, 1 + 1e-9)))).
int landau_widom_M(double c, double alpha);

}  // namespace krm
