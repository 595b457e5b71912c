#pragma once

// Experiment drivers behind the krm_exp command-line tool. Each run_* function
// computes its result, writes the requested CSV/JSON/SVG files into
// cfg.output_dir, and returns the numbers for programmatic checks.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "krm/bounds.hpp"

namespace krm {

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class ExperimentKind { Table1, FixedCHistogram, HermiteApprox, SpectralSurvey, BoundsReport, PswfTable };

// Subcommand name: table1, fixed-c-hist, hermite, survey, bounds, pswf.
std::string to_string(ExperimentKind kind);
// Accepts the subcommand names and the enum spellings (Table1, FixedCHistogram, ...).
ExperimentKind parse_experiment_kind(const std::string& name);

struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::Table1;
  std::vector<double> c;
  int N = 0;
  std::vector<int> N_sweep;  // fixed-c-hist: sample sizes for the convergence sweep
  std::vector<int> M;
  bool M_auto = false;
  int trials = 1;
  std::uint64_t base_seed = 1;
  std::filesystem::path output_dir = "out";
  bool emit_csv = true;
  bool emit_json = true;
  bool emit_svg = true;
  std::string basis;               // fixed-c-hist: "pswf" or "legendre"
  std::vector<double> tail_c;      // bounds: kernel bandwidths for the tail-norm grid
  int tail_M_max = 30;             // bounds: largest M on the tail-norm grid
  std::vector<double> hermite_c;   // bounds: bandwidths for the Chernoff and R_l tables
  double delta = 0.5;
  double eps = 0.1;
  bool record_wall_clock = false;  // embeds elapsed seconds in JSON (breaks byte-identity)
};

// Defaults for one experiment (table1: c=1, N=5, 21 trials, M=2..20 step 2, etc.).
ExperimentConfig default_config(ExperimentKind kind);

// Overlays the keys of a JSON object onto the defaults of its experiment. When
// `expected` is set, a differing "experiment" key is an error. Unknown keys and
// ill-typed or out-of-range values throw ConfigError.
ExperimentConfig config_from_json(const nlohmann::json& j, std::optional<ExperimentKind> expected = std::nullopt);
ExperimentConfig load_config(const std::filesystem::path& path, std::optional<ExperimentKind> expected);
nlohmann::ordered_json config_to_json(const ExperimentConfig& cfg);

// M values for bandwidth c: the configured list, or when "auto",
// landau_widom_M(c, 8) for fixed-c experiments and floor(c/2) for Hermite ones.
std::vector<int> resolve_M(const ExperimentConfig& cfg, double c);

// HS residual decay (table1)

struct Table1Row {
  int M = 0;
  double mean = 0.0;
  double std = 0.0;
  double min = 0.0;
  double max = 0.0;
  std::vector<double> per_trial;
  double rounding_bound = 0.0;  // largest a-priori rounding bound over the trials
  bool weyl_holds = true;       // Weyl gap inequality on every trial
  double max_weyl_gap = 0.0;
};

struct Table1Result {
  double c = 0.0;
  int N = 0;
  std::vector<std::uint64_t> seeds;
  std::vector<Table1Row> rows;
};

Table1Result run_table1(const ExperimentConfig& cfg);

// Fixed-c histogram

struct FixedCSweepPoint {
  int N = 0;
  double mean_gap_limit = 0.0;  // mean over trials of max_j |eig_j(Ã)/N - limit_j|
  double mean_gap_raw = 0.0;    // mean over trials of max_j |eig_j(Ã)/N - eig_j(T_M)|
  bool rank_ok = true;          // exactly M eigenvalues above the zero threshold in every trial
};

struct FixedCResult {
  double c = 0.0;
  int M = 0;
  std::string basis;
  std::vector<double> t_eigenvalues;  // eig(T_M), descending
  std::vector<double> limit;          // density-weighted limit of eig(Ã)/N
  std::vector<double> pooled;         // nonzero eig(Ã)/N over all trials at N = cfg.N
  FixedCSweepPoint main;              // at N = cfg.N
  std::vector<FixedCSweepPoint> sweep;
  std::vector<std::uint64_t> seeds;
};

FixedCResult run_fixed_c_histogram(const ExperimentConfig& cfg);

// Hermite approximation

struct HermiteRow {
  int n = 0;               // highest index kept: S_n f = sum_{k<=n} a_k phi_k
  double l2_error = 0.0;   // ||f - S_n f||_{L^2(-1,1)}
  double bound = 0.0;      // hermite_L2_err(c, n, ||f||_{L^2(R)})
};

struct HermiteResult {
  double c = 0.0;
  double L = 0.0;                 // coefficients integrated over [-L, L]
  int quadrature_order = 0;
  double restricted_norm = 0.0;   // ||f||_{L^2(-1,1)}
  double line_norm = 0.0;         // ||f||_{L^2(R)} = sqrt(pi / c)
  std::vector<double> coefficients;
  std::vector<HermiteRow> rows;
};

HermiteResult run_hermite_approx(const ExperimentConfig& cfg);

// Spectral survey

struct SurveyRow {
  double c = 0.0;
  double count = 0.0;          // mean over trials of #{sigma_j >= 0.5}
  double count_unscaled = 0.0; // same with (c / (pi N)) lambda_j
  double mid_fraction = 0.0;   // mean fraction of sigma_j in [0.1, 0.9]
  double theory = 0.0;         // 2c / pi
};

struct SurveyResult {
  int N = 0;
  std::vector<SurveyRow> rows;
  double slope = 0.0;
  double intercept = 0.0;
  std::vector<std::uint64_t> seeds;
};

SurveyResult run_spectral_survey(const ExperimentConfig& cfg);

// Bounds report

struct TailRow {
  double c = 0.0;
  int M = 0;
  double tail = 0.0;
  double rounding = 0.0;
  double bound = 0.0;
  bool holds_strict = false;
  bool holds = false;  // tail <= bound + rounding
};

struct ExpectedRRow {
  double c = 0.0;
  int M = 0;
  double empirical_mean = 0.0;
  double rounding = 0.0;
  BoundReport bound;
  bool holds_strict = false;
  bool holds = false;
};

struct ChernoffRow {
  double c = 0.0;
  int M = 0;
  ChernoffReport report;
  double lambda_min_q10 = 0.0, lambda_min_median = 0.0;
  double lambda_max_median = 0.0, lambda_max_q90 = 0.0;
  double min_violation_rate = 0.0;  // fraction of trials with lambda_min < min threshold
  double max_violation_rate = 0.0;  // fraction of trials with lambda_max > max threshold
  double sup_scan = 0.0;            // max over [-1,1] and k < M of |phi_k^{(c)}|^2
  double L = 0.0;
  bool thresholds_ordered = false;
};

struct BoundsResult {
  std::vector<TailRow> tails;
  std::vector<ExpectedRRow> expected;
  std::vector<ChernoffRow> chernoff;
  std::vector<BoundReport> mcdiarmid;
  std::vector<std::uint64_t> seeds;
};

BoundsResult run_bounds_report(const ExperimentConfig& cfg);

// PSWF table

struct PswfRow {
  double c = 0.0;
  int M = 0;
  std::vector<double> lambdas;
  std::vector<double> nystrom;
  double sum_all = 0.0;  // (c/pi) trace(T_M): sum over every computed eigenvalue
  int count_half = 0;
  bool strictly_decreasing = false;
  double max_delta_first10 = 0.0;
};

struct PswfTableResult {
  int nystrom_nodes = 0;
  std::vector<PswfRow> rows;
};

PswfTableResult run_pswf_table(const ExperimentConfig& cfg);

// Dispatches on cfg.experiment.
void run_experiment(const ExperimentConfig& cfg);

}  // namespace krm
