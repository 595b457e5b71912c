#include "krm/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>
#include <numbers>
#include <numeric>

#include "krm/basis.hpp"
#include "krm/bounds.hpp"
#include "krm/errors.hpp"
#include "krm/galerkin.hpp"
#include "krm/kernel.hpp"
#include "krm/pswf.hpp"
#include "krm/quadrature.hpp"
#include "krm/randmat.hpp"
#include "krm/report.hpp"
#include "krm/rng.hpp"
#include "krm/spectra.hpp"
#include "krm/version.hpp"

namespace krm {

namespace {

using report::CsvTable;
using report::Json;
using Clock = std::chrono::steady_clock;

// Runs body(t) for t in [0, trials) across OpenMP threads. Results go into
// per-trial slots, so output does not depend on scheduling. The exception from
// the lowest failing trial index is rethrown.
template <class Body>
void for_each_trial(int trials, Body body) {
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(trials));
#pragma omp parallel for schedule(static)
  for (int t = 0; t < trials; ++t) {
    try {
      body(t);
    } catch (...) {
      errors[static_cast<std::size_t>(t)] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

std::vector<std::uint64_t> trial_seeds(std::uint64_t base, int trials) {
  std::vector<std::uint64_t> seeds(static_cast<std::size_t>(trials));
  for (int t = 0; t < trials; ++t) seeds[static_cast<std::size_t>(t)] = trial_seed(base, static_cast<std::uint64_t>(t));
  return seeds;
}

class Emitter {
 public:
  explicit Emitter(const ExperimentConfig& cfg) : cfg_(cfg), start_(Clock::now()) {}

  void csv(const std::string& name, const std::string& text) const {
    if (cfg_.emit_csv) report::write_text(cfg_.output_dir / name, text);
  }
  void svg(const std::string& name, const std::string& text) const {
    if (cfg_.emit_svg) report::write_text(cfg_.output_dir / name, text);
  }
  void json(const std::string& name, Json body, const std::vector<std::uint64_t>& seeds) const {
    if (!cfg_.emit_json) return;
    Json doc;
    doc["library"] = "krm";
    doc["version"] = kVersion;
    doc["rng"] = std::string(CounterRng::kName);
    doc["config"] = config_to_json(cfg_);
    doc["seeds"] = seeds;
    if (cfg_.record_wall_clock) {
      doc["wall_clock_seconds"] = std::chrono::duration<double>(Clock::now() - start_).count();
    } else {
      doc["wall_clock_seconds"] = nullptr;
    }
    doc["results"] = std::move(body);
    report::write_text(cfg_.output_dir / name, doc.dump(2) + "\n");
  }

 private:
  const ExperimentConfig& cfg_;
  Clock::time_point start_;
};

std::string label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

double sample_std(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = mean_of(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(v.size() - 1));
}

// Lower nearest-rank quantile of a sorted list.
double quantile(const std::vector<double>& sorted, double p) {
  if (sorted.empty()) return 0.0;
  const auto k = static_cast<std::size_t>(std::floor(p * static_cast<double>(sorted.size() - 1)));
  return sorted[k];
}

double max_abs_gap(const std::vector<double>& a, const std::vector<double>& b) {
  double g = 0.0;
  for (std::size_t j = 0; j < std::min(a.size(), b.size()); ++j) g = std::max(g, std::abs(a[j] - b[j]));
  return g;
}

// ||A - Ã||_HS for one sample draw, with the a-priori rounding bound and the Weyl check.
struct ResidualTrial {
  double norm = 0.0;
  double rounding = 0.0;
  WeylResult weyl;
};

ResidualTrial residual_trial(const KernelSpec& kernel, const TMatrix& T, int N, std::uint64_t seed, bool weyl) {
  const SampleSet samples = draw_samples(N, Distribution::Uniform, seed);
  const KernelMatrix A = build_A(kernel, samples);
  const DesignMatrix H = build_H(T.basis, T.M, samples);
  const EstimatorMatrix E = build_estimator(H, T);
  const Residual R = hs_residual(A, E);
  ResidualTrial out;
  out.norm = R.hs_norm;
  out.rounding = hs_residual_rounding_bound(A, H, T);
  if (weyl) out.weyl = weyl_check(sym_eigvals(A.entries), sym_eigvals(E.entries), R.hs_norm);
  return out;
}

Json bound_list(const std::vector<BoundReport>& reports) {
  Json arr = Json::array();
  for (const BoundReport& r : reports) arr.push_back(report::to_json(r));
  return arr;
}

}  // namespace

// HS residual decay (table1)

Table1Result run_table1(const ExperimentConfig& cfg) {
  const Emitter out(cfg);
  Table1Result res;
  res.c = cfg.c.front();
  res.N = cfg.N;
  res.seeds = trial_seeds(cfg.base_seed, cfg.trials);
  const KernelSpec kernel = KernelSpec::sinc(res.c);

  for (int M : resolve_M(cfg, res.c)) {
    const TMatrix T = assemble_T(kernel, BasisId::legendre(), M);
    std::vector<ResidualTrial> trials(static_cast<std::size_t>(cfg.trials));
    for_each_trial(cfg.trials, [&](int t) {
      trials[static_cast<std::size_t>(t)] = residual_trial(kernel, T, cfg.N, res.seeds[static_cast<std::size_t>(t)], true);
    });
    Table1Row row;
    row.M = M;
    for (const ResidualTrial& tr : trials) {
      row.per_trial.push_back(tr.norm);
      row.rounding_bound = std::max(row.rounding_bound, tr.rounding);
      row.weyl_holds = row.weyl_holds && tr.weyl.holds;
      row.max_weyl_gap = std::max(row.max_weyl_gap, tr.weyl.max_gap);
    }
    row.mean = mean_of(row.per_trial);
    row.std = sample_std(row.per_trial);
    row.min = *std::min_element(row.per_trial.begin(), row.per_trial.end());
    row.max = *std::max_element(row.per_trial.begin(), row.per_trial.end());
    res.rows.push_back(std::move(row));
  }

  CsvTable csv({"M", "mean", "std", "min", "max"});
  Json rows = Json::array();
  report::Series series{"mean ||A - A~||_HS", {}, {}, "#1f77b4"};
  for (const Table1Row& r : res.rows) {
    csv.row().add(r.M).add(r.mean).add(r.std).add(r.min).add(r.max);
    Json j;
    j["M"] = r.M;
    j["mean"] = r.mean;
    j["std"] = r.std;
    j["min"] = r.min;
    j["max"] = r.max;
    j["per_trial"] = r.per_trial;
    j["rounding_bound"] = r.rounding_bound;
    j["weyl_holds"] = r.weyl_holds;
    j["max_weyl_gap"] = r.max_weyl_gap;
    rows.push_back(j);
    series.x.push_back(r.M);
    series.y.push_back(r.mean);
  }
  out.csv("table1.csv", csv.str());
  Json body;
  body["c"] = res.c;
  body["N"] = res.N;
  body["rows"] = rows;
  out.json("table1.json", body, res.seeds);
  out.svg("table1.svg", report::svg_line_plot("Mean HS residual, c=" + label(res.c) + ", N=" + std::to_string(res.N),
                                              "M", "mean residual", {series}, true, kVersion));
  return res;
}

// Fixed-c histogram

FixedCResult run_fixed_c_histogram(const ExperimentConfig& cfg) {
  const Emitter out(cfg);
  FixedCResult res;
  res.c = cfg.c.front();
  res.M = resolve_M(cfg, res.c).front();
  res.basis = cfg.basis;
  res.seeds = trial_seeds(cfg.base_seed, cfg.trials);
  const int M = res.M;

  TMatrix T;
  Eigen::MatrixXd moment;
  PswfSet pswf;
  const bool prolate = cfg.basis == "pswf";
  if (prolate) {
    pswf = pswf_solve(res.c, std::max({landau_widom_M(res.c, 8.0), M + 10, 11}));
    if (pswf.count < M) throw ResolutionError("PSWF set too small for the requested M");
    T = pswf_T(pswf, M);
    const Eigen::MatrixXd C = pswf.coeffs.leftCols(M);
    moment = C.transpose() * sampling_moment_matrix(BasisId::legendre(), pswf.M, Distribution::Uniform) * C;
  } else {
    T = assemble_T(KernelSpec::sinc(res.c), BasisId::legendre(), M);
    moment = sampling_moment_matrix(BasisId::legendre(), M, Distribution::Uniform);
  }
  res.t_eigenvalues = sym_eigvals(T.entries).values;
  res.limit = estimator_limit_spectrum(T, moment);

  auto run_point = [&](int N, std::vector<double>* pooled) {
    std::vector<std::vector<double>> values(static_cast<std::size_t>(cfg.trials));
    for_each_trial(cfg.trials, [&](int t) {
      const SampleSet s = draw_samples(N, Distribution::Uniform, res.seeds[static_cast<std::size_t>(t)]);
      DesignMatrix H;
      H.basis = T.basis;
      H.entries = prolate ? pswf_eval_matrix(pswf, M, s.xs) : build_H(T.basis, M, s).entries;
      std::vector<double> v = estimator_nonzero_eigenvalues(H, T);
      for (double& x : v) x /= static_cast<double>(N);
      values[static_cast<std::size_t>(t)] = std::move(v);
    });
    FixedCSweepPoint p;
    p.N = N;
    double gl = 0.0, gr = 0.0;
    for (const auto& v : values) {
      const double thr = kZeroEigenvalueRatio * v.front();
      const long nonzero = std::count_if(v.begin(), v.end(), [thr](double x) { return x > thr; });
      p.rank_ok = p.rank_ok && nonzero == M;
      gl += max_abs_gap(v, res.limit);
      gr += max_abs_gap(v, res.t_eigenvalues);
      if (pooled) pooled->insert(pooled->end(), v.begin(), v.end());
    }
    p.mean_gap_limit = gl / cfg.trials;
    p.mean_gap_raw = gr / cfg.trials;
    return p;
  };

  res.main = run_point(cfg.N, &res.pooled);
  for (int N : cfg.N_sweep) res.sweep.push_back(N == cfg.N ? res.main : run_point(N, nullptr));

  const SpectralHistogram hist = histogram_auto(res.pooled, HistogramNormalization::Density);
  std::vector<double> markers = res.t_eigenvalues;
  markers.insert(markers.end(), res.limit.begin(), res.limit.end());

  CsvTable eig({"index", "eig_T", "limit"});
  for (int j = 0; j < M; ++j) eig.row().add(j).add(res.t_eigenvalues[j]).add(res.limit[j]);
  CsvTable sweep({"N", "mean_gap_limit", "mean_gap_raw", "rank_ok"});
  Json sweep_json = Json::array();
  for (const FixedCSweepPoint& p : res.sweep) {
    sweep.row().add(p.N).add(p.mean_gap_limit).add(p.mean_gap_raw).add(p.rank_ok ? 1 : 0);
    sweep_json.push_back({{"N", p.N}, {"mean_gap_limit", p.mean_gap_limit}, {"mean_gap_raw", p.mean_gap_raw},
                          {"rank_ok", p.rank_ok}});
  }
  out.csv("fixed_c_eigenvalues.csv", eig.str());
  out.csv("fixed_c_pooled.csv", report::spectrum_csv(res.pooled));
  out.csv("fixed_c_histogram.csv", report::histogram_csv(hist));
  out.csv("fixed_c_sweep.csv", sweep.str());
  Json body;
  body["c"] = res.c;
  body["M"] = M;
  body["basis"] = res.basis;
  body["t_eigenvalues"] = res.t_eigenvalues;
  body["limit"] = res.limit;
  body["main"] = {{"N", res.main.N}, {"mean_gap_limit", res.main.mean_gap_limit},
                  {"mean_gap_raw", res.main.mean_gap_raw}, {"rank_ok", res.main.rank_ok}};
  body["sweep"] = sweep_json;
  body["histogram"] = report::to_json(hist);
  out.json("fixed_c.json", body, res.seeds);
  out.svg("fixed_c.svg",
          report::svg_histogram("Nonzero eig(A~)/N, c=" + label(res.c) + ", M=" + std::to_string(M) + ", N=" +
                                    std::to_string(cfg.N) + " (dashed: eig(T_M) and limit)",
                                "eigenvalue", hist, markers, kVersion));
  return res;
}

// Hermite approximation

HermiteResult run_hermite_approx(const ExperimentConfig& cfg) {
  const Emitter out(cfg);
  HermiteResult res;
  const double c = cfg.c.front();
  res.c = c;
  std::vector<int> ns = resolve_M(cfg, c);
  const int n_max = *std::max_element(ns.begin(), ns.end());
  const auto count = static_cast<std::size_t>(n_max) + 1;
  const double sqrt_c = std::sqrt(c);

  // Truncation of the real line: past the turning point sqrt(2n+1) every phi_k
  // (k <= n) decays monotonically, so |phi_k^{(c)}| <= 1e-12 at L bounds the tail.
  const double turning = std::sqrt(2.0 * n_max + 1.0);
  double L = (turning + std::sqrt(2.0 * std::log(1e12))) / sqrt_c;
  std::vector<double> phi(count);
  for (int iter = 0; iter < 100; ++iter) {
    hermite_scaled_values(c, L, phi);
    double worst = 0.0;
    for (double v : phi) worst = std::max(worst, std::abs(v));
    if (worst <= 1e-12) break;
    L *= 1.05;
  }
  res.L = L;
  const double omega = c + std::sqrt(c * (2.0 * n_max + 1.0));
  res.quadrature_order = std::min(kMaxGaussOrder, static_cast<int>(std::ceil(std::numbers::e * omega * L)) + 40);

  auto coefficients = [&](int order) {
    const QuadratureRule rule = gauss_legendre_rule(order, -L, L);
    std::vector<double> a(count, 0.0);
    std::vector<double> v(count);
    for (int i = 0; i < rule.order; ++i) {
      const double t = rule.nodes[i];
      hermite_scaled_values(c, t, v);
      const double wf = rule.weights[i] * sinc_eval(c, t);
      for (std::size_t k = 0; k < count; ++k) a[k] += wf * v[k];
    }
    return a;
  };
  res.coefficients = coefficients(res.quadrature_order);
  const std::vector<double> check = coefficients(std::min(kMaxGaussOrder, 2 * res.quadrature_order));
  const double quadrature_change = max_abs_gap(res.coefficients, check);

  // Errors on [-1, 1] by Gauss quadrature of the squared residual.
  const QuadratureRule err_rule =
      gauss_legendre_rule(std::min(kMaxGaussOrder, static_cast<int>(std::ceil(std::numbers::e * omega)) + 40));
  std::vector<double> sq_err(count, 0.0);
  double restricted = 0.0;
  std::vector<double> v(count);
  for (int i = 0; i < err_rule.order; ++i) {
    const double x = err_rule.nodes[i];
    hermite_scaled_values(c, x, v);
    const double f = sinc_eval(c, x);
    restricted += err_rule.weights[i] * f * f;
    double s = 0.0;
    for (std::size_t k = 0; k < count; ++k) {
      s += res.coefficients[k] * v[k];
      sq_err[k] += err_rule.weights[i] * (f - s) * (f - s);
    }
  }
  res.restricted_norm = std::sqrt(restricted);
  res.line_norm = std::sqrt(std::numbers::pi / c);
  for (int n : ns) {
    res.rows.push_back({n, std::sqrt(sq_err[static_cast<std::size_t>(n)]),
                        hermite_L2_err(c, n, res.line_norm).value});
  }

  // Pointwise curves on a uniform grid.
  std::vector<std::string> header{"x", "f"};
  for (int n : ns) {
    header.push_back("approx_n" + std::to_string(n));
    header.push_back("error_n" + std::to_string(n));
  }
  CsvTable pointwise(header);
  std::vector<report::Series> curves;
  curves.push_back({"sinc(c x)", {}, {}, "#000000"});
  const char* palette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2"};
  std::vector<report::Series> errors;
  for (std::size_t s = 0; s < ns.size(); ++s) {
    curves.push_back({"n=" + std::to_string(ns[s]), {}, {}, palette[s % 7]});
    errors.push_back({"n=" + std::to_string(ns[s]), {}, {}, palette[s % 7]});
  }
  for (int i = 0; i < cfg.N; ++i) {
    const double x = -1.0 + 2.0 * i / (cfg.N - 1);
    hermite_scaled_values(c, x, v);
    const double f = sinc_eval(c, x);
    std::vector<double> partial(count);
    double s = 0.0;
    for (std::size_t k = 0; k < count; ++k) partial[k] = (s += res.coefficients[k] * v[k]);
    pointwise.row().add(x).add(f);
    curves[0].x.push_back(x);
    curves[0].y.push_back(f);
    for (std::size_t q = 0; q < ns.size(); ++q) {
      const double approx = partial[static_cast<std::size_t>(ns[q])];
      pointwise.add(approx).add(f - approx);
      curves[q + 1].x.push_back(x);
      curves[q + 1].y.push_back(approx);
      errors[q].x.push_back(x);
      errors[q].y.push_back(std::abs(f - approx));
    }
  }

  CsvTable summary({"n", "l2_error", "bound"});
  Json rows = Json::array();
  for (const HermiteRow& r : res.rows) {
    summary.row().add(r.n).add(r.l2_error).add(r.bound);
    rows.push_back({{"n", r.n}, {"l2_error", r.l2_error}, {"bound", r.bound}});
  }
  out.csv("hermite_summary.csv", summary.str());
  out.csv("hermite_pointwise.csv", pointwise.str());
  Json body;
  body["c"] = c;
  body["L"] = res.L;
  body["quadrature_order"] = res.quadrature_order;
  body["quadrature_change"] = quadrature_change;
  body["restricted_norm"] = res.restricted_norm;
  body["line_norm"] = res.line_norm;
  body["coefficients"] = res.coefficients;
  body["rows"] = rows;
  out.json("hermite.json", body, {});
  out.svg("hermite.svg", report::svg_line_plot("Scaled Hermite approximation of sinc, c=" + label(c), "x", "value",
                                               curves, false, kVersion));
  out.svg("hermite_error.svg", report::svg_line_plot("Pointwise error, c=" + label(c), "x", "|error|", errors, true,
                                                     kVersion));
  return res;
}

// Spectral survey

SurveyResult run_spectral_survey(const ExperimentConfig& cfg) {
  const Emitter out(cfg);
  SurveyResult res;
  res.N = cfg.N;
  res.seeds = trial_seeds(cfg.base_seed, cfg.trials);
  const double rho = sampling_density(Distribution::Uniform);
  std::vector<report::Panel> panels;
  Json per_c = Json::array();

  for (double c : cfg.c) {
    const KernelSpec kernel = KernelSpec::sinc(c);
    std::vector<std::vector<double>> lambdas(static_cast<std::size_t>(cfg.trials));
    for_each_trial(cfg.trials, [&](int t) {
      const SampleSet s = draw_samples(cfg.N, Distribution::Uniform, res.seeds[static_cast<std::size_t>(t)]);
      lambdas[static_cast<std::size_t>(t)] = sym_eigvals(build_A(kernel, s).entries).values;
    });
    SurveyRow row;
    row.c = c;
    row.theory = 2.0 * c / std::numbers::pi;
    std::vector<double> pooled;
    for (const auto& lam : lambdas) {
      const double scale = c / (std::numbers::pi * cfg.N);
      std::vector<double> sigma(lam.size());
      for (std::size_t j = 0; j < lam.size(); ++j) sigma[j] = scale * lam[j] / rho;
      const Spectrum sig = make_spectrum(sigma);
      row.count += count_threshold(sig, AtLeast{0.5});
      row.count_unscaled += std::count_if(lam.begin(), lam.end(), [&](double l) { return scale * l >= 0.5; });
      row.mid_fraction += static_cast<double>(count_threshold(sig, Near{0.5, 0.4})) / cfg.N;
      pooled.insert(pooled.end(), sigma.begin(), sigma.end());
    }
    row.count /= cfg.trials;
    row.count_unscaled /= cfg.trials;
    row.mid_fraction /= cfg.trials;
    res.rows.push_back(row);

    const auto [lo, hi] = std::minmax_element(pooled.begin(), pooled.end());
    std::vector<double> edges(41);
    const double a = std::min(*lo, 0.0), b = std::max(*hi, 1.0);
    for (int k = 0; k <= 40; ++k) edges[k] = a + (b - a) * k / 40.0;
    edges.back() = b;
    const SpectralHistogram hist = histogram(pooled, edges);
    panels.push_back({"c=" + label(c), hist, {0.5}});
    out.csv("survey_sigma_c" + label(c) + ".csv", report::spectrum_csv(pooled));
    out.csv("survey_hist_c" + label(c) + ".csv", report::histogram_csv(hist));
    per_c.push_back({{"c", c}, {"count", row.count}, {"count_unscaled", row.count_unscaled},
                     {"mid_fraction", row.mid_fraction}, {"theory", row.theory},
                     {"histogram", report::to_json(hist)}});
  }

  // Least squares count = slope * c + intercept.
  const double n = static_cast<double>(res.rows.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const SurveyRow& r : res.rows) {
    sx += r.c;
    sy += r.count;
    sxx += r.c * r.c;
    sxy += r.c * r.count;
  }
  const double den = n * sxx - sx * sx;
  res.slope = den != 0.0 ? (n * sxy - sx * sy) / den : 0.0;
  res.intercept = (sy - res.slope * sx) / n;

  CsvTable counts({"c", "count", "count_unscaled", "mid_fraction", "theory"});
  for (const SurveyRow& r : res.rows) {
    counts.row().add(r.c).add(r.count).add(r.count_unscaled).add(r.mid_fraction).add(r.theory);
  }
  out.csv("survey_counts.csv", counts.str());
  Json body;
  body["N"] = res.N;
  body["density"] = rho;
  body["slope"] = res.slope;
  body["intercept"] = res.intercept;
  body["reference_slope"] = 2.0 / std::numbers::pi;
  body["per_c"] = per_c;
  out.json("survey.json", body, res.seeds);
  out.svg("survey.svg", report::svg_histogram_grid("Normalized sinc spectrum, N=" + std::to_string(res.N), panels, 2,
                                                   kVersion));
  return res;
}

// Bounds report

BoundsResult run_bounds_report(const ExperimentConfig& cfg) {
  const Emitter out(cfg);
  BoundsResult res;
  res.seeds = trial_seeds(cfg.base_seed, cfg.trials);
  Json truncation = Json::array();

  // Truncation bounds against the measured Monte-Carlo residual.
  for (double c : cfg.c) {
    const KernelSpec kernel = KernelSpec::sinc(c);
    for (int M : resolve_M(cfg, c)) {
      const TMatrix T = assemble_T(kernel, BasisId::legendre(), M);
      std::vector<ResidualTrial> trials(static_cast<std::size_t>(cfg.trials));
      for_each_trial(cfg.trials, [&](int t) {
        trials[static_cast<std::size_t>(t)] = residual_trial(kernel, T, cfg.N, res.seeds[static_cast<std::size_t>(t)], false);
      });
      ExpectedRRow row;
      row.c = c;
      row.M = M;
      std::vector<double> norms;
      for (const ResidualTrial& tr : trials) {
        norms.push_back(tr.norm);
        row.rounding = std::max(row.rounding, tr.rounding);
      }
      row.empirical_mean = mean_of(norms);
      row.bound = bound_expected_R(cfg.N, M, c, kernel.l2_norm());
      row.holds_strict = row.bound.valid && row.empirical_mean <= row.bound.value;
      row.holds = row.bound.valid && row.empirical_mean <= row.bound.value + row.rounding;
      const BoundReport rm = bound_rM(c, M, kernel.l2_norm());
      const BoundReport mc = mcdiarmid_probability(cfg.eps, c, M, cfg.N, kernel.sup_bound());
      res.mcdiarmid.push_back(mc);
      truncation.push_back({{"c", c},
                            {"M", M},
                            {"empirical_mean", row.empirical_mean},
                            {"rounding_bound", row.rounding},
                            {"holds_strict", row.holds_strict},
                            {"holds", row.holds},
                            {"bound_rM", report::to_json(rm)},
                            {"bound_expected_R", report::to_json(row.bound)},
                            {"mcdiarmid", report::to_json(mc)}});
      res.expected.push_back(std::move(row));
    }
  }

  // bound_rM against the tail of the Legendre coefficient array.
  Json tails = Json::array();
  for (double c : cfg.tail_c) {
    const KernelSpec kernel = KernelSpec::sinc(c);
    const int M_big = std::max(2 * cfg.tail_M_max, landau_widom_M(c, 12.0));
    const QuadratureRule rule =
        gauss_legendre_rule(required_quadrature_order(kernel, BasisId::legendre(), M_big) + 32);
    const int M_first = static_cast<int>(std::ceil(std::numbers::e * c / 2.0)) + 1;
    for (int M = M_first; M <= cfg.tail_M_max; ++M) {
      const TailNorm tn = residual_tail_norm(kernel, BasisId::legendre(), M, M_big, rule);
      const BoundReport b = bound_rM(c, M, kernel.l2_norm());
      TailRow row{c, M, tn.value, tn.rounding_bound, b.value, b.valid && tn.value <= b.value,
                  b.valid && tn.value <= b.value + tn.rounding_bound};
      tails.push_back({{"c", c}, {"M", M}, {"M_big", tn.M_big}, {"tail", tn.value},
                       {"rounding_bound", tn.rounding_bound}, {"bound", report::to_json(b)},
                       {"holds_strict", row.holds_strict}, {"holds", row.holds}});
      res.tails.push_back(row);
    }
  }

  // Chernoff thresholds against the measured extreme eigenvalues of G_M.
  Json chernoff = Json::array();
  for (double c : cfg.hermite_c) {
    const int M = std::max(1, static_cast<int>(std::floor(c / 2.0)));
    ChernoffRow row;
    row.c = c;
    row.M = M;
    row.report = chernoff_bounds(c, M, cfg.delta);
    const BasisId basis = BasisId::scaled_hermite(c);
    std::vector<double> lmin(static_cast<std::size_t>(cfg.trials)), lmax(static_cast<std::size_t>(cfg.trials));
    for_each_trial(cfg.trials, [&](int t) {
      const SampleSet s = draw_samples(M, Distribution::Uniform, res.seeds[static_cast<std::size_t>(t)]);
      const Spectrum sp = sym_eigvals(gram_truncated(build_H(basis, M, s), M));
      lmax[static_cast<std::size_t>(t)] = sp.values.front();
      lmin[static_cast<std::size_t>(t)] = sp.values.back();
    });
    const double thr_min = row.report.min.extra("threshold");
    const double thr_max = row.report.max.extra("threshold");
    row.min_violation_rate =
        static_cast<double>(std::count_if(lmin.begin(), lmin.end(), [&](double v) { return v < thr_min; })) /
        cfg.trials;
    row.max_violation_rate =
        static_cast<double>(std::count_if(lmax.begin(), lmax.end(), [&](double v) { return v > thr_max; })) /
        cfg.trials;
    std::sort(lmin.begin(), lmin.end());
    std::sort(lmax.begin(), lmax.end());
    row.lambda_min_q10 = quantile(lmin, 0.1);
    row.lambda_min_median = quantile(lmin, 0.5);
    row.lambda_max_median = quantile(lmax, 0.5);
    row.lambda_max_q90 = quantile(lmax, 0.9);
    std::vector<double> v(static_cast<std::size_t>(M));
    for (int i = 0; i <= 2000; ++i) {
      hermite_scaled_values(c, -1.0 + i / 1000.0, v);
      for (double x : v) row.sup_scan = std::max(row.sup_scan, x * x);
    }
    row.L = row.report.min.extra("L");
    row.thresholds_ordered = thr_min <= thr_max;
    chernoff.push_back({{"c", c},
                        {"M", M},
                        {"delta", cfg.delta},
                        {"min", report::to_json(row.report.min)},
                        {"max", report::to_json(row.report.max)},
                        {"thresholds_ordered", row.thresholds_ordered},
                        {"lambda_min_q10", row.lambda_min_q10},
                        {"lambda_min_median", row.lambda_min_median},
                        {"lambda_max_median", row.lambda_max_median},
                        {"lambda_max_q90", row.lambda_max_q90},
                        {"min_violation_rate", row.min_violation_rate},
                        {"max_violation_rate", row.max_violation_rate},
                        {"sup_scan", row.sup_scan},
                        {"L", row.L},
                        {"L_bounds_sup", row.sup_scan <= row.L}});
    res.chernoff.push_back(row);
  }

  // R_l(c) tables.
  Json tails_R = Json::array();
  for (double c : cfg.hermite_c) {
    std::vector<BoundReport> rs;
    for (int l = 1; l <= std::max(1, static_cast<int>(std::floor(c / 2.0))) + 10; ++l) rs.push_back(hermite_tail_R(l, c));
    tails_R.push_back({{"c", c}, {"reports", bound_list(rs)}});
  }

  CsvTable expected_csv({"c", "M", "empirical_mean", "rounding_bound", "bound_expected_R", "valid", "holds"});
  for (const ExpectedRRow& r : res.expected) {
    expected_csv.row().add(r.c).add(r.M).add(r.empirical_mean).add(r.rounding).add(r.bound.value)
        .add(r.bound.valid ? 1 : 0).add(r.holds ? 1 : 0);
  }
  CsvTable tail_csv({"c", "M", "tail", "rounding_bound", "bound_rM", "holds_strict", "holds"});
  std::vector<report::Series> tail_series;
  const char* palette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728"};
  for (const TailRow& r : res.tails) {
    tail_csv.row().add(r.c).add(r.M).add(r.tail).add(r.rounding).add(r.bound).add(r.holds_strict ? 1 : 0)
        .add(r.holds ? 1 : 0);
    if (tail_series.empty() || tail_series.back().label != "tail c=" + label(r.c)) {
      const char* color = palette[(tail_series.size() / 2) % 4];
      tail_series.push_back({"tail c=" + label(r.c), {}, {}, color});
      tail_series.push_back({"bound c=" + label(r.c), {}, {}, color});
    }
    auto& t = tail_series[tail_series.size() - 2];
    auto& b = tail_series.back();
    t.x.push_back(r.M);
    t.y.push_back(r.tail);
    b.x.push_back(r.M);
    b.y.push_back(r.bound);
  }
  CsvTable chernoff_csv({"c", "M", "delta", "min_threshold", "min_probability", "max_threshold", "max_probability",
                         "lambda_min_q10", "lambda_min_median", "lambda_max_median", "lambda_max_q90",
                         "min_violation_rate", "max_violation_rate"});
  for (const ChernoffRow& r : res.chernoff) {
    chernoff_csv.row().add(r.c).add(r.M).add(cfg.delta).add(r.report.min.extra("threshold")).add(r.report.min.value)
        .add(r.report.max.extra("threshold")).add(r.report.max.value).add(r.lambda_min_q10).add(r.lambda_min_median)
        .add(r.lambda_max_median).add(r.lambda_max_q90).add(r.min_violation_rate).add(r.max_violation_rate);
  }
  out.csv("bounds_expected.csv", expected_csv.str());
  out.csv("bounds_tail.csv", tail_csv.str());
  out.csv("bounds_chernoff.csv", chernoff_csv.str());
  Json body;
  body["N"] = cfg.N;
  body["truncation"] = truncation;
  body["tail"] = tails;
  body["chernoff"] = chernoff;
  body["hermite_tail_R"] = tails_R;
  out.json("bounds.json", body, res.seeds);
  out.svg("bounds_tail.svg", report::svg_line_plot("Legendre tail norm and truncation bound", "M", "norm",
                                                   tail_series, true, kVersion));
  return res;
}

// PSWF table

PswfTableResult run_pswf_table(const ExperimentConfig& cfg) {
  const Emitter out(cfg);
  PswfTableResult res;
  res.nystrom_nodes = cfg.N;
  const QuadratureRule grid = gauss_legendre_rule(cfg.N);
  CsvTable table({"c", "n", "lambda", "nystrom", "delta"});
  CsvTable summary({"c", "M", "count", "sum_all", "two_c_over_pi", "count_ge_half", "round_two_c_over_pi",
                    "strictly_decreasing", "max_delta_first10"});
  Json sets = Json::array();
  std::vector<report::Series> series;
  const char* palette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd"};

  for (double c : cfg.c) {
    const int M = resolve_M(cfg, c).front();
    const PswfSet set = pswf_solve(c, M);
    PswfRow row;
    row.c = c;
    row.M = M;
    row.lambdas = set.lambdas;
    row.nystrom = nystrom_sinc_eigenvalues(c, grid, set.count);
    row.sum_all = c / std::numbers::pi * assemble_T(KernelSpec::sinc(c), BasisId::legendre(), M).entries.trace();
    row.count_half = static_cast<int>(std::count_if(set.lambdas.begin(), set.lambdas.end(), [](double l) { return l >= 0.5; }));
    row.strictly_decreasing = true;
    for (int n = 1; n < set.count; ++n) row.strictly_decreasing = row.strictly_decreasing && set.lambdas[n] < set.lambdas[n - 1];
    for (int n = 0; n < std::min(10, set.count); ++n) {
      row.max_delta_first10 = std::max(row.max_delta_first10, std::abs(set.lambdas[n] - row.nystrom[n]));
    }
    report::Series s{"c=" + label(c), {}, {}, palette[series.size() % 5]};
    for (int n = 0; n < set.count; ++n) {
      table.row().add(c).add(n).add(set.lambdas[n]).add(row.nystrom[n]).add(set.lambdas[n] - row.nystrom[n]);
      s.x.push_back(n);
      s.y.push_back(set.lambdas[n]);
    }
    series.push_back(std::move(s));
    summary.row().add(c).add(M).add(set.count).add(row.sum_all).add(2.0 * c / std::numbers::pi).add(row.count_half)
        .add(static_cast<int>(std::lround(2.0 * c / std::numbers::pi))).add(row.strictly_decreasing ? 1 : 0)
        .add(row.max_delta_first10);
    Json j = report::to_json(set);
    j["nystrom"] = row.nystrom;
    j["sum_all"] = row.sum_all;
    j["count_ge_half"] = row.count_half;
    j["strictly_decreasing"] = row.strictly_decreasing;
    j["max_delta_first10"] = row.max_delta_first10;
    sets.push_back(j);
    res.rows.push_back(std::move(row));
  }
  out.csv("pswf_table.csv", table.str());
  out.csv("pswf_summary.csv", summary.str());
  Json body;
  body["nystrom_nodes"] = cfg.N;
  body["sets"] = sets;
  out.json("pswf.json", body, {});
  out.svg("pswf.svg", report::svg_line_plot("PSWF eigenvalues", "n", "lambda_n", series, true, kVersion));
  return res;
}

void run_experiment(const ExperimentConfig& cfg) {
  switch (cfg.experiment) {
    case ExperimentKind::Table1: run_table1(cfg); return;
    case ExperimentKind::FixedCHistogram: run_fixed_c_histogram(cfg); return;
    case ExperimentKind::HermiteApprox: run_hermite_approx(cfg); return;
    case ExperimentKind::SpectralSurvey: run_spectral_survey(cfg); return;
    case ExperimentKind::BoundsReport: run_bounds_report(cfg); return;
    case ExperimentKind::PswfTable: run_pswf_table(cfg); return;
  }
}

}  // namespace krm
