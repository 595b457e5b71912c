#pragma once

#include <Eigen/Dense>
#include <span>
#include <variant>
#include <vector>

namespace krm {

struct Spectrum {
  std::vector<double> values;   // descending
  int source_dim = 0;
  double residual_bound = 0.0;  // max ||A v - lambda v|| / ||A|| over the extreme pairs
};

// All eigenvalues of a real symmetric matrix, largest first. Rejects input whose
// symmetry departure exceeds 1e-10 * max|a_ij|. With check_residual the extreme
// eigenpairs are verified to backward error 1e-10 * ||A||; a larger residual throws.
Spectrum sym_eigvals(const Eigen::MatrixXd& matrix, bool check_residual = true);

Spectrum make_spectrum(std::vector<double> values);

struct WeylResult {
  bool holds = false;
  double max_gap = 0.0;
};

// max_j |a_j - b_j| <= hs + 1e-10 for two descending spectra of equal length.
WeylResult weyl_check(const Spectrum& a, const Spectrum& b, double hs);

struct AtLeast {
  double threshold;
};
struct Near {
  double center;
  double radius;
};
using ThresholdMode = std::variant<AtLeast, Near>;

// AtLeast counts values >= threshold; Near counts values in [center - radius, center + radius].
int count_threshold(const Spectrum& spectrum, const ThresholdMode& mode);

// Eigenvalues below this fraction of the largest one are treated as zero.
inline constexpr double kZeroEigenvalueRatio = 1e-10;

enum class HistogramNormalization { Count, Density };

struct SpectralHistogram {
  std::vector<double> edges;  // strictly increasing
  std::vector<long> counts;   // counts[k] for [edges[k], edges[k+1]); the last bin is closed
  HistogramNormalization normalization = HistogramNormalization::Count;
  long outside = 0;           // values not covered by the edges

  long total() const;
  // Bar heights under the chosen normalization.
  std::vector<double> heights() const;
};

// A value equal to an interior edge goes to the bin on its right.
SpectralHistogram histogram(std::span<const double> values, std::span<const double> edges,
                            HistogramNormalization normalization = HistogramNormalization::Count);

// Freedman-Diaconis bin width, at least 10 and at most 1000 bins over [min, max].
SpectralHistogram histogram_auto(std::span<const double> values,
                                 HistogramNormalization normalization = HistogramNormalization::Count);

}  // namespace krm
