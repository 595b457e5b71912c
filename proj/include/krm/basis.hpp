#pragma once

#include <Eigen/Dense>
#include <span>
#include <string>

namespace krm {

enum class BasisKind {
  LegendreNormalized,  // sqrt(n + 1/2) P_n on [-1, 1]
  ScaledHermite,       // c^{1/4} phi_n(sqrt(c) t), phi_n the orthonormal Hermite functions
  Prolate,             // PSWF basis; evaluated through a PswfSet, see pswf.hpp
};

struct BasisId {
  BasisKind kind = BasisKind::LegendreNormalized;
  double bandwidth = 0.0;  // c, required for ScaledHermite and Prolate

  static BasisId legendre() { return {}; }
  static BasisId scaled_hermite(double c);
  static BasisId prolate(double c);

  std::string name() const;
  friend bool operator==(const BasisId&, const BasisId&) = default;
};

// Samples within this distance outside [-1, 1] are snapped onto the interval.
inline constexpr double kDomainSlack = 1e-14;

// Returns x clamped to [-1, 1] if it lies within kDomainSlack of it, throws DomainError otherwise.
double clamp_to_interval(double x);

// sqrt(n + 1/2) P_n(x) by the three-term recurrence.
double legendre_norm_eval(int n, double x);

// c^{1/4} phi_n(sqrt(c) t). The recurrence runs on a mantissa with a separate log
// scale, so neither H_n nor n! is formed and large sqrt(c)|t| does not underflow early.
double hermite_scaled_eval(int n, double c, double t);

/// Fills out[k] = P~_k(x) for k < out.size(). x must already be in [-1, 1].
void legendre_norm_values(double x, std::span<double> out);

/// Fills out[k] = phi_k^{(c)}(t) for k < out.size(). No restriction on t.
void hermite_scaled_values(double c, double t, std::span<double> out);

/// Dispatches on the basis kind. Throws DomainError for Prolate (needs a PswfSet).
void basis_values(const BasisId& basis, double x, std::span<double> out);

/// N x M matrix with entry (i, m) = phi_m(xs[i]); filled row by row, one sample per row.
Eigen::MatrixXd eval_matrix(const BasisId& basis, int M, std::span<const double> xs);

}  // namespace krm
