#include "krm/spectra.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

#include "krm/errors.hpp"

namespace krm {

namespace {

double quantile_sorted(const std::vector<double>& sorted, double q) {
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

}  // namespace

Spectrum sym_eigvals(const Eigen::MatrixXd& matrix, bool check_residual) {
  if (matrix.rows() != matrix.cols()) throw DimensionError("sym_eigvals needs a square matrix");
  if (matrix.rows() == 0) throw DimensionError("sym_eigvals needs a nonempty matrix");
  const double scale = matrix.cwiseAbs().maxCoeff();
  const double departure = (matrix - matrix.transpose()).cwiseAbs().maxCoeff();
  if (departure > 1e-10 * scale) throw DomainError("matrix is not symmetric (departure " + std::to_string(departure) + ")");

  const int n = static_cast<int>(matrix.rows());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(
      matrix, check_residual ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericalError("symmetric eigen-solver did not converge");

  Spectrum s;
  s.source_dim = n;
  s.values.assign(solver.eigenvalues().data(), solver.eigenvalues().data() + n);
  std::reverse(s.values.begin(), s.values.end());

  if (check_residual) {
    const double norm = std::max(std::abs(s.values.front()), std::abs(s.values.back()));
    double worst = 0.0;
    if (norm > 0.0) {
      for (int idx : {0, n - 1}) {
        const Eigen::VectorXd v = solver.eigenvectors().col(idx);
        const double lambda = solver.eigenvalues()(idx);
        worst = std::max(worst, (matrix * v - lambda * v).norm() / norm);
      }
    }
    if (worst > 1e-10) throw NumericalError("eigenpair backward error " + std::to_string(worst) + " above 1e-10");
    s.residual_bound = worst;
  }
  return s;
}

Spectrum make_spectrum(std::vector<double> values) {
  std::sort(values.begin(), values.end(), std::greater<>());
  Spectrum s;
  s.source_dim = static_cast<int>(values.size());
  s.values = std::move(values);
  return s;
}

WeylResult weyl_check(const Spectrum& a, const Spectrum& b, double hs) {
  if (a.values.size() != b.values.size()) throw DimensionError("weyl_check needs spectra of equal length");
  WeylResult r;
  for (std::size_t j = 0; j < a.values.size(); ++j) {
    r.max_gap = std::max(r.max_gap, std::abs(a.values[j] - b.values[j]));
  }
  r.holds = r.max_gap <= hs + 1e-10;
  return r;
}

int count_threshold(const Spectrum& spectrum, const ThresholdMode& mode) {
  if (const auto* at_least = std::get_if<AtLeast>(&mode)) {
    return static_cast<int>(std::count_if(spectrum.values.begin(), spectrum.values.end(),
                                          [&](double v) { return v >= at_least->threshold; }));
  }
  const Near& near = std::get<Near>(mode);
  return static_cast<int>(std::count_if(spectrum.values.begin(), spectrum.values.end(), [&](double v) {
    return v >= near.center - near.radius && v <= near.center + near.radius;
  }));
}

long SpectralHistogram::total() const {
  long t = 0;
  for (long c : counts) t += c;
  return t;
}

std::vector<double> SpectralHistogram::heights() const {
  std::vector<double> h(counts.begin(), counts.end());
  if (normalization == HistogramNormalization::Density) {
    const double n = static_cast<double>(total());
    for (std::size_t k = 0; k < h.size(); ++k) h[k] = n > 0 ? h[k] / (n * (edges[k + 1] - edges[k])) : 0.0;
  }
  return h;
}

SpectralHistogram histogram(std::span<const double> values, std::span<const double> edges,
                            HistogramNormalization normalization) {
  if (values.empty()) throw DomainError("histogram of an empty spectrum");
  if (edges.size() < 2) throw DomainError("histogram needs at least two edges");
  for (std::size_t k = 0; k + 1 < edges.size(); ++k) {
    if (!(edges[k] < edges[k + 1])) throw DomainError("histogram edges must be strictly increasing");
  }
  SpectralHistogram h;
  h.edges.assign(edges.begin(), edges.end());
  h.counts.assign(edges.size() - 1, 0);
  h.normalization = normalization;
  for (double v : values) {
    if (v < edges.front() || v > edges.back()) {
      ++h.outside;
      continue;
    }
    // first edge strictly greater than v; values on an interior edge go right
    auto it = std::upper_bound(edges.begin(), edges.end(), v);
    std::size_t bin = static_cast<std::size_t>(it - edges.begin());
    bin = bin == 0 ? 0 : bin - 1;
    if (bin >= h.counts.size()) bin = h.counts.size() - 1;  // v == last edge
    ++h.counts[bin];
  }
  return h;
}

SpectralHistogram histogram_auto(std::span<const double> values, HistogramNormalization normalization) {
  if (values.empty()) throw DomainError("histogram of an empty spectrum");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  double lo = sorted.front();
  double hi = sorted.back();
  if (hi - lo <= 0.0) {
    lo -= 0.5;
    hi += 0.5;
  }
  const double iqr = quantile_sorted(sorted, 0.75) - quantile_sorted(sorted, 0.25);
  int bins = 10;
  if (iqr > 0.0) {
    const double width = 2.0 * iqr / std::cbrt(static_cast<double>(sorted.size()));
    bins = static_cast<int>(std::ceil((hi - lo) / width));
  }
  bins = std::clamp(bins, 10, 1000);
  std::vector<double> edges(bins + 1);
  for (int k = 0; k <= bins; ++k) edges[k] = lo + (hi - lo) * k / bins;
  edges.back() = hi;
  return histogram(values, edges, normalization);
}

}  // namespace krm
