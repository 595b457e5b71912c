#include "krm/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace krm::report {

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 420.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 20.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 50.0;

std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char ch : s) {
    switch (ch) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += ch;
    }
  }
  return out;
}

struct Frame {
  double x0, y0, w, h;            // plot area in pixels
  double xmin, xmax, ymin, ymax;  // data range
  double px(double x) const { return x0 + (x - xmin) / (xmax - xmin) * w; }
  double py(double y) const { return y0 + h - (y - ymin) / (ymax - ymin) * h; }
};

void widen(double& lo, double& hi) {
  if (!(hi > lo)) {
    const double pad = lo == 0.0 ? 1.0 : std::abs(lo) * 0.1;
    lo -= pad;
    hi += pad;
  }
}

void axes(std::ostringstream& os, const Frame& f, const std::string& xlabel, const std::string& ylabel,
          bool log_y) {
  os << "<rect x=\"" << fmt("%.1f", f.x0) << "\" y=\"" << fmt("%.1f", f.y0) << "\" width=\"" << fmt("%.1f", f.w)
     << "\" height=\"" << fmt("%.1f", f.h) << "\" fill=\"none\" stroke=\"#333\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double xv = f.xmin + (f.xmax - f.xmin) * i / 4.0;
    const double yv = f.ymin + (f.ymax - f.ymin) * i / 4.0;
    const double px = f.px(xv);
    const double py = f.py(yv);
    os << "<line x1=\"" << fmt("%.1f", px) << "\" y1=\"" << fmt("%.1f", f.y0 + f.h) << "\" x2=\""
       << fmt("%.1f", px) << "\" y2=\"" << fmt("%.1f", f.y0 + f.h + 5) << "\" stroke=\"#333\"/>\n";
    os << "<text x=\"" << fmt("%.1f", px) << "\" y=\"" << fmt("%.1f", f.y0 + f.h + 18)
       << "\" font-size=\"11\" text-anchor=\"middle\">" << fmt("%.3g", xv) << "</text>\n";
    os << "<line x1=\"" << fmt("%.1f", f.x0 - 5) << "\" y1=\"" << fmt("%.1f", py) << "\" x2=\""
       << fmt("%.1f", f.x0) << "\" y2=\"" << fmt("%.1f", py) << "\" stroke=\"#333\"/>\n";
    const std::string label = log_y ? "1e" + fmt("%.3g", yv) : fmt("%.3g", yv);
    os << "<text x=\"" << fmt("%.1f", f.x0 - 8) << "\" y=\"" << fmt("%.1f", py + 4)
       << "\" font-size=\"11\" text-anchor=\"end\">" << label << "</text>\n";
  }
  os << "<text x=\"" << fmt("%.1f", f.x0 + f.w / 2) << "\" y=\"" << fmt("%.1f", f.y0 + f.h + 36)
     << "\" font-size=\"12\" text-anchor=\"middle\">" << escape(xlabel) << "</text>\n";
  if (!ylabel.empty()) {
    os << "<text x=\"14\" y=\"" << fmt("%.1f", f.y0 + f.h / 2) << "\" font-size=\"12\" text-anchor=\"middle\" "
       << "transform=\"rotate(-90 14 " << fmt("%.1f", f.y0 + f.h / 2) << ")\">" << escape(ylabel) << "</text>\n";
  }
}

void open_svg(std::ostringstream& os, double w, double h, const std::string& title, const std::string& version) {
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  os << "<!-- krm " << escape(version) << " -->\n";
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt("%.0f", w) << "\" height=\"" << fmt("%.0f", h)
     << "\" viewBox=\"0 0 " << fmt("%.0f", w) << ' ' << fmt("%.0f", h) << "\" font-family=\"sans-serif\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << fmt("%.1f", w / 2) << "\" y=\"24\" font-size=\"15\" text-anchor=\"middle\">" << escape(title)
     << "</text>\n";
}

void draw_histogram(std::ostringstream& os, const Frame& f, const SpectralHistogram& h,
                    const std::vector<double>& heights, const std::vector<double>& markers) {
  for (std::size_t k = 0; k < h.counts.size(); ++k) {
    if (heights[k] <= 0.0) continue;
    const double xa = f.px(h.edges[k]);
    const double xb = f.px(h.edges[k + 1]);
    const double yt = f.py(heights[k]);
    os << "<rect x=\"" << fmt("%.2f", xa) << "\" y=\"" << fmt("%.2f", yt) << "\" width=\""
       << fmt("%.2f", std::max(xb - xa, 0.5)) << "\" height=\"" << fmt("%.2f", f.y0 + f.h - yt)
       << "\" fill=\"#4c72b0\" fill-opacity=\"0.8\"/>\n";
  }
  for (double m : markers) {
    if (m < f.xmin || m > f.xmax) continue;
    os << "<line x1=\"" << fmt("%.2f", f.px(m)) << "\" y1=\"" << fmt("%.1f", f.y0) << "\" x2=\""
       << fmt("%.2f", f.px(m)) << "\" y2=\"" << fmt("%.1f", f.y0 + f.h)
       << "\" stroke=\"#c44e52\" stroke-dasharray=\"4 3\"/>\n";
  }
}

Frame histogram_frame(double x0, double y0, double w, double h, const SpectralHistogram& hist,
                      const std::vector<double>& heights, const std::vector<double>& markers) {
  double xmin = hist.edges.front();
  double xmax = hist.edges.back();
  for (double m : markers) {
    xmin = std::min(xmin, m);
    xmax = std::max(xmax, m);
  }
  widen(xmin, xmax);
  double ymax = 0.0;
  for (double v : heights) ymax = std::max(ymax, v);
  if (ymax <= 0.0) ymax = 1.0;
  return {x0, y0, w, h, xmin, xmax, 0.0, ymax * 1.05};
}

}  // namespace

std::string format_double(double v) { return fmt("%.17g", v); }

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

CsvTable& CsvTable::row() {
  rows_.emplace_back();
  return *this;
}

CsvTable& CsvTable::add(double v) {
  rows_.back().push_back(format_double(v));
  return *this;
}

CsvTable& CsvTable::add(long long v) {
  rows_.back().push_back(std::to_string(v));
  return *this;
}

CsvTable& CsvTable::add(const std::string& v) {
  rows_.back().push_back(v);
  return *this;
}

std::string CsvTable::str() const {
  std::string out;
  auto line = [&out](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      out += cells[i];
    }
    out += '\n';
  };
  line(header_);
  for (const auto& r : rows_) line(r);
  return out;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw std::runtime_error("write to " + path.string() + " failed");
}

Json to_json(const BoundReport& r) {
  Json j;
  j["name"] = r.name;
  j["value"] = r.value;
  j["log_value"] = r.log_value;
  j["valid"] = r.valid;
  Json inputs = Json::object();
  for (const auto& [k, v] : r.inputs) inputs[k] = v;
  j["inputs"] = inputs;
  Json extras = Json::object();
  for (const auto& [k, v] : r.extras) extras[k] = v;
  j["extras"] = extras;
  return j;
}

Json to_json(const SpectralHistogram& h) {
  Json j;
  j["edges"] = h.edges;
  j["counts"] = h.counts;
  j["normalization"] = h.normalization == HistogramNormalization::Count ? "count" : "density";
  j["outside"] = h.outside;
  return j;
}

namespace {

std::vector<double> row_major(const Eigen::MatrixXd& m) {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(m.size()));
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) out.push_back(m(i, j));
  }
  return out;
}

}  // namespace

Json to_json(const TMatrix& t) {
  Json j;
  j["c"] = t.basis.kind == BasisKind::LegendreNormalized ? t.kernel.bandwidth() : t.basis.bandwidth;
  j["M"] = t.M;
  j["basis"] = t.basis.name();
  j["entries"] = row_major(t.entries);
  return j;
}

Json to_json(const PswfSet& set) {
  Json j;
  j["c"] = set.c;
  j["M"] = set.M;
  j["basis"] = "legendre";
  j["count"] = set.count;
  j["lambdas"] = set.lambdas;
  j["coeffs"] = row_major(set.coeffs);
  return j;
}

std::string matrix_csv(const Eigen::MatrixXd& m, int N, int M, double c, std::uint64_t seed) {
  std::string out = "# N=" + std::to_string(N) + ",M=" + std::to_string(M) + ",c=" + format_double(c) +
                    ",seed=" + std::to_string(seed) + "\n";
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) out += ',';
      out += format_double(m(i, j));
    }
    out += '\n';
  }
  return out;
}

std::string spectrum_csv(const std::vector<double>& values) {
  std::string out = "value\n";
  for (double v : values) out += format_double(v) + '\n';
  return out;
}

std::string histogram_csv(const SpectralHistogram& h) {
  CsvTable t({"edge_lo", "edge_hi", "count"});
  for (std::size_t k = 0; k < h.counts.size(); ++k) {
    t.row().add(h.edges[k]).add(h.edges[k + 1]).add(static_cast<long long>(h.counts[k]));
  }
  return t.str();
}

std::string svg_histogram(const std::string& title, const std::string& xlabel, const SpectralHistogram& h,
                          const std::vector<double>& markers, const std::string& version) {
  std::ostringstream os;
  open_svg(os, kWidth, kHeight, title, version);
  const std::vector<double> heights = h.heights();
  const Frame f = histogram_frame(kLeft, kTop, kWidth - kLeft - kRight, kHeight - kTop - kBottom, h, heights, markers);
  axes(os, f, xlabel, h.normalization == HistogramNormalization::Count ? "count" : "density", false);
  draw_histogram(os, f, h, heights, markers);
  os << "</svg>\n";
  return os.str();
}

std::string svg_line_plot(const std::string& title, const std::string& xlabel, const std::string& ylabel,
                          const std::vector<Series>& series, bool log_y, const std::string& version) {
  std::ostringstream os;
  open_svg(os, kWidth, kHeight, title, version);
  auto ty = [log_y](double y) {
    return log_y ? std::log10(std::max(std::abs(y), std::numeric_limits<double>::min())) : y;
  };
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  for (const Series& s : series) {
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      xmin = std::min(xmin, s.x[i]);
      xmax = std::max(xmax, s.x[i]);
      ymin = std::min(ymin, ty(s.y[i]));
      ymax = std::max(ymax, ty(s.y[i]));
    }
  }
  if (!std::isfinite(xmin)) xmin = 0.0, xmax = 1.0, ymin = 0.0, ymax = 1.0;
  widen(xmin, xmax);
  widen(ymin, ymax);
  const Frame f{kLeft, kTop, kWidth - kLeft - kRight - 120.0, kHeight - kTop - kBottom, xmin, xmax, ymin, ymax};
  axes(os, f, xlabel, log_y ? "log10 " + ylabel : ylabel, log_y);
  double legend_y = kTop + 10.0;
  for (const Series& s : series) {
    os << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (i) os << ' ';
      os << fmt("%.2f", f.px(s.x[i])) << ',' << fmt("%.2f", f.py(ty(s.y[i])));
    }
    os << "\"/>\n";
    const double lx = f.x0 + f.w + 12.0;
    os << "<line x1=\"" << fmt("%.1f", lx) << "\" y1=\"" << fmt("%.1f", legend_y) << "\" x2=\""
       << fmt("%.1f", lx + 18) << "\" y2=\"" << fmt("%.1f", legend_y) << "\" stroke=\"" << s.color
       << "\" stroke-width=\"2\"/>\n";
    os << "<text x=\"" << fmt("%.1f", lx + 22) << "\" y=\"" << fmt("%.1f", legend_y + 4) << "\" font-size=\"11\">"
       << escape(s.label) << "</text>\n";
    legend_y += 16.0;
  }
  os << "</svg>\n";
  return os.str();
}

std::string svg_histogram_grid(const std::string& title, const std::vector<Panel>& panels, int columns,
                               const std::string& version) {
  columns = std::max(columns, 1);
  const int rows = (static_cast<int>(panels.size()) + columns - 1) / columns;
  const double cell_w = 400.0, cell_h = 280.0;
  std::ostringstream os;
  open_svg(os, cell_w * columns, 40.0 + cell_h * std::max(rows, 1), title, version);
  for (std::size_t p = 0; p < panels.size(); ++p) {
    const double ox = cell_w * static_cast<double>(p % columns);
    const double oy = 40.0 + cell_h * static_cast<double>(p / columns);
    const Panel& panel = panels[p];
    os << "<text x=\"" << fmt("%.1f", ox + cell_w / 2) << "\" y=\"" << fmt("%.1f", oy + 14)
       << "\" font-size=\"13\" text-anchor=\"middle\">" << escape(panel.title) << "</text>\n";
    const std::vector<double> heights = panel.histogram.heights();
    const Frame f = histogram_frame(ox + 60.0, oy + 24.0, cell_w - 80.0, cell_h - 70.0, panel.histogram, heights,
                                    panel.markers);
    axes(os, f, "sigma", "", false);
    draw_histogram(os, f, panel.histogram, heights, panel.markers);
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace krm::report
