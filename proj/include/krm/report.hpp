#pragma once

// Output helpers for the experiment harness: CSV with round-trip doubles, JSON
// serialization of library types, and self-contained SVG plots.

#include <Eigen/Dense>
#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "krm/bounds.hpp"
#include "krm/galerkin.hpp"
#include "krm/pswf.hpp"
#include "krm/spectra.hpp"

namespace krm::report {

using Json = nlohmann::ordered_json;

// Formats a double with 17 significant digits ("%.17g").
std::string format_double(double v);

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);

  // Starts a new row; cells are appended with add().
  CsvTable& row();
  CsvTable& add(double v);
  CsvTable& add(long long v);
  CsvTable& add(int v) { return add(static_cast<long long>(v)); }
  CsvTable& add(const std::string& v);

  std::string str() const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

// Writes the text to path; throws std::runtime_error on failure.
void write_text(const std::filesystem::path& path, const std::string& text);

Json to_json(const BoundReport& r);
Json to_json(const SpectralHistogram& h);
// {c, M, basis, entries (row-major)}
Json to_json(const TMatrix& t);
// {c, M, basis, count, lambdas, coeffs (row-major, M x count)}
Json to_json(const PswfSet& set);

// Row-major CSV preceded by the line "# N=..,M=..,c=..,seed=..".
std::string matrix_csv(const Eigen::MatrixXd& m, int N, int M, double c, std::uint64_t seed);

// One value per line.
std::string spectrum_csv(const std::vector<double>& values);
// edge_lo,edge_hi,count rows.
std::string histogram_csv(const SpectralHistogram& h);

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  std::string color = "#1f77b4";
};

struct Panel {
  std::string title;
  SpectralHistogram histogram;
  std::vector<double> markers;  // vertical reference lines
};

std::string svg_histogram(const std::string& title, const std::string& xlabel, const SpectralHistogram& h,
                          const std::vector<double>& markers, const std::string& version);

std::string svg_line_plot(const std::string& title, const std::string& xlabel, const std::string& ylabel,
                          const std::vector<Series>& series, bool log_y, const std::string& version);

std::string svg_histogram_grid(const std::string& title, const std::vector<Panel>& panels, int columns,
                               const std::string& version);

}  // namespace krm::report
