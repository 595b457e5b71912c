#include <CLI11.hpp>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <unistd.h>
#include <vector>

#include "big_oracles.hpp"
#include "grid_oracles.hpp"
#include "krm/bounds.hpp"
#include "krm/experiments.hpp"
#include "krm/galerkin.hpp"
#include "krm/kernel.hpp"
#include "krm/pswf.hpp"
#include "krm/randmat.hpp"
#include "krm/rng.hpp"
#include "krm/spectra.hpp"

using namespace krm;
using namespace krm_test;
namespace fs = std::filesystem;

namespace {

struct Verdict {
  bool pass = true;
  std::string detail;
};

// Appends a printf-style note to the verdict detail.
template <class... Args>
void note(Verdict& v, const char* format, Args... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  if (!v.detail.empty()) v.detail += "; ";
  v.detail += buf;
}

void require(Verdict& v, bool ok, const std::string& what) {
  if (!ok) {
    v.pass = false;
    note(v, "failed: %s", what.c_str());
  }
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("krm_acceptance_" + std::to_string(::getpid())) / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

ExperimentConfig quiet(ExperimentKind kind, const std::string& dir) {
  ExperimentConfig cfg = default_config(kind);
  cfg.output_dir = scratch(dir);
  cfg.emit_svg = false;
  return cfg;
}

Verdict residual_decay() {
  Verdict v;
  const auto t0 = std::chrono::steady_clock::now();
  const Table1Result r = run_table1(quiet(ExperimentKind::Table1, "c1"));
  const double secs = seconds_since(t0);
  require(v, r.c == 1.0 && r.N == 5 && r.seeds.size() == 21, "configuration c=1, N=5, 21 trials");
  const double plateau = 1e-13;
  for (std::size_t i = 0; i < r.rows.size(); ++i) {
    const Table1Row& row = r.rows[i];
    if (row.M == 2) {
      note(v, "mean(M=2)=%.4g", row.mean);
      require(v, row.mean >= 0.1 && row.mean <= 1.0, "mean at M=2 in [0.1, 1]");
    }
    if (row.M == 8) {
      note(v, "mean(M=8)=%.3g", row.mean);
      require(v, row.mean <= 1e-6, "mean at M=8 <= 1e-6");
    }
    if (row.M >= 14) require(v, row.mean <= 1e-12, "mean <= 1e-12 at M=" + std::to_string(row.M));
    if (i > 0 && r.rows[i - 1].mean > plateau)
      require(v, row.mean <= r.rows[i - 1].mean, "nonincreasing before the plateau at M=" + std::to_string(row.M));
  }
  note(v, "mean(M=20)=%.3g", r.rows.back().mean);
  note(v, "runtime %.2f s", secs);
  require(v, secs < 5.0, "runtime < 5 s");
  return v;
}

Verdict trace_identity() {
  Verdict v;
  const auto t0 = std::chrono::steady_clock::now();
  for (double c : {1.0, 5.0, 10.0}) {
    const int M = landau_widom_M(c, 12.0);
    const double dev = std::abs(assemble_T(KernelSpec::sinc(c), BasisId::legendre(), M).entries.trace() - 2.0);
    note(v, "c=%g M=%d |tr-2|=%.3g", c, M, dev);
    require(v, dev <= 1e-6, "trace within 1e-6 of 2 at c=" + std::to_string(static_cast<int>(c)));
  }
  const double secs = seconds_since(t0);
  note(v, "runtime %.2f s", secs);
  require(v, secs < 10.0, "runtime < 10 s");
  return v;
}

Verdict pswf_vs_nystrom() {
  Verdict v;
  for (double c : {2.0, 5.0, 10.0}) {
    ExperimentConfig cfg = default_config(ExperimentKind::PswfTable);
    cfg.M_auto = true;
    const int M = resolve_M(cfg, c).front();
    const PswfSet p = pswf_solve(c, M);
    const std::vector<double> ref = nystrom_lambdas(c, 10);
    double delta = 0.0;
    for (int n = 0; n < 10; ++n) delta = std::max(delta, std::abs(p.lambdas[n] - ref[n]));
    bool ordered = true;
    for (std::size_t n = 0; n < p.lambdas.size(); ++n) {
      if (!(p.lambdas[n] > 0.0 && p.lambdas[n] < 1.0)) ordered = false;
      if (n > 0 && !(p.lambdas[n] < p.lambdas[n - 1])) ordered = false;
    }
    const int big = count_threshold(make_spectrum(p.lambdas), AtLeast{0.5});
    const long expect = std::lround(2.0 * c / std::numbers::pi);
    note(v, "c=%g M=%d max|dlambda|=%.2g count>=0.5: %d (2c/pi rounds to %ld)", c, M, delta, big, expect);
    require(v, delta <= 1e-8, "first 10 eigenvalues within 1e-8 of Nystrom");
    require(v, ordered, "strictly decreasing in (0,1)");
    require(v, std::abs(big - expect) <= 1, "count within 1 of round(2c/pi)");
  }
  return v;
}

Verdict estimator_rank() {
  Verdict v;
  const int N = 200, M = 10;
  const TMatrix t = assemble_T(KernelSpec::sinc(6.0), BasisId::legendre(), M);
  int good = 0;
  for (int inst = 0; inst < 50; ++inst) {
    const DesignMatrix h = build_H(BasisId::legendre(), M, draw_samples(N, Distribution::Uniform, trial_seed(4, inst)));
    const Spectrum s = sym_eigvals(build_estimator(h, t).entries);
    const double cut = 1e-10 * s.values.front();
    int below = 0;
    for (double x : s.values)
      if (x < cut) ++below;
    if (below == N - M) ++good;
  }
  note(v, "%d of 50 instances have exactly N-M=190 eigenvalues below 1e-10 lambda_max", good);
  require(v, good == 50, "rank on every instance");
  return v;
}

Verdict weyl_gap() {
  Verdict v;
  int instances = 0, held = 0;
  double worst = 0.0;
  auto check = [&](const KernelSpec& k, int M, const SampleSet& x) {
    const KernelMatrix a = build_A(k, x);
    const TMatrix t = assemble_T(k, BasisId::legendre(), M);
    const EstimatorMatrix e = build_estimator(build_H(BasisId::legendre(), M, x), t);
    const Residual r = hs_residual(a, e);
    const WeylResult w = weyl_check(sym_eigvals(a.entries), sym_eigvals(e.entries), r.hs_norm);
    ++instances;
    if (w.holds) ++held;
    worst = std::max(worst, w.max_gap - r.hs_norm);
  };
  // Residual-decay instances: c=1, N=5, 21 trials, M=2..20.
  for (int M = 2; M <= 20; M += 2)
    for (int tr = 0; tr < 21; ++tr) check(KernelSpec::sinc(1.0), M, draw_samples(5, Distribution::Uniform, trial_seed(1, tr)));
  // Rank instances: c=6, N=200, M=10.
  for (int inst = 0; inst < 50; ++inst)
    check(KernelSpec::sinc(6.0), 10, draw_samples(200, Distribution::Uniform, trial_seed(4, inst)));
  // A wider sweep over bandwidths and truncation orders.
  for (double c : {2.0, 10.0, 20.0})
    for (int M : {4, 12, 24}) check(KernelSpec::sinc(c), M, draw_samples(120, Distribution::Uniform, trial_seed(7, M)));
  note(v, "%d of %d instances hold; largest max_gap - HS = %.3g", held, instances, worst);
  require(v, held == instances, "Weyl gap on every instance");
  return v;
}

Verdict fixed_c_convergence() {
  Verdict v;
  const auto t0 = std::chrono::steady_clock::now();
  ExperimentConfig cfg = quiet(ExperimentKind::FixedCHistogram, "c6");
  cfg.c = {6.0};
  cfg.M = {6};
  cfg.N = 10000;
  cfg.N_sweep = {100, 1000, 10000};
  cfg.trials = 20;
  const FixedCResult r = run_fixed_c_histogram(cfg);
  const double secs = seconds_since(t0);
  for (const FixedCSweepPoint& p : r.sweep)
    note(v, "N=%d gap=%.4g (raw %.4g)", p.N, p.mean_gap_limit, p.mean_gap_raw);
  for (std::size_t i = 1; i < r.sweep.size(); ++i)
    require(v, r.sweep[i].mean_gap_limit < r.sweep[i - 1].mean_gap_limit, "monotone decrease over N");
  require(v, !r.sweep.empty() && r.sweep.back().N == 10000 && r.sweep.back().mean_gap_limit <= 0.02, "gap <= 0.02 at N=1e4");
  note(v, "runtime %.1f s", secs);
  require(v, secs < 180.0, "runtime < 3 min");
  return v;
}

double hermite_identity_gap(double c, int M) {
  const TMatrix t = assemble_T(KernelSpec::sinc(c), BasisId::scaled_hermite(c), M);
  const Eigen::MatrixXd d = (c / std::numbers::pi) * t.entries - Eigen::MatrixXd::Identity(M, M);
  return d.cwiseAbs().maxCoeff();
}

Verdict hermite_identity() {
  Verdict v;
  const double gap = hermite_identity_gap(100.0, 50);
  note(v, "c=100 M=50 max|(c/pi)T - I|=%.3g", gap);
  for (int M : {20, 30, 40}) note(v, "M=%d: %.3g", M, hermite_identity_gap(100.0, M));
  require(v, gap <= 1e-3, "identity within 1e-3 at M=50");
  return v;
}

Verdict bounds_evaluation() {
  Verdict v;
  double worst = 0.0;
  auto track = [&](double got, const Big& want) { worst = std::max(worst, rel(got, want)); };
  long compared = 0;
  for (double c : {0.5, 1.0, 5.0, 20.0}) {
    const int first = static_cast<int>(std::floor(std::numbers::e * c / 2.0)) + 1;
    for (int M = first; M <= first + 40; ++M) {
      track(bound_rM(c, M, 1.0).value, oracle_rM(c, M, 1.0));
      for (int N : {5, 500}) {
        const BoundReport p = mcdiarmid_probability(0.1, c, M, N, 1.0);
        const Big d = oracle_D(c, M, N, 1.0);
        if (d > Big(std::numeric_limits<double>::min())) track(p.extra("D"), d);
        const Big prob = clamp_complement(2 * mp::exp(-2 * Big(0.01) / d));
        if (prob != 0) track(p.value, prob);
        compared += 2;
      }
      ++compared;
    }
  }
  for (double c : {1.0, 20.0, 40.0, 100.0}) {
    for (int M : {1, 5, 10, 20, 50}) {
      const ChernoffReport r = chernoff_bounds(c, M, 0.5);
      const ChernoffOracle o = oracle_chernoff(c, M, 0.5);
      track(r.min.extra("threshold"), o.min_threshold);
      track(r.max.extra("threshold"), o.max_threshold);
      if (o.min_prob != 0) track(r.min.value, o.min_prob);
      if (o.max_prob != 0) track(r.max.value, o.max_prob);
      compared += 4;
    }
    for (int l = 1; l <= 150; ++l) {
      const Big want = oracle_R(l, c);
      if (want > Big(std::numeric_limits<double>::min())) track(hermite_tail_R(l, c).value, want);
      ++compared;
    }
  }
  note(v, "%ld values, worst relative error %.2g", compared, worst);
  require(v, worst <= 1e-12, "relative agreement 1e-12");

  const BoundsResult b = run_bounds_report(quiet(ExperimentKind::BoundsReport, "c8"));
  int tails = 0, tails_ok = 0, tails_strict = 0, expect = 0, expect_ok = 0, expect_strict = 0;
  for (const TailRow& t : b.tails) {
    ++tails;
    tails_ok += t.holds;
    tails_strict += t.holds_strict;
  }
  for (const ExpectedRRow& e : b.expected) {
    if (!e.bound.valid) continue;
    ++expect;
    expect_ok += e.holds;
    expect_strict += e.holds_strict;
  }
  note(v, "bound_rM dominates %d/%d tail norms (%d strictly)", tails_ok, tails, tails_strict);
  note(v, "expected-R bound dominates %d/%d means (%d strictly)", expect_ok, expect, expect_strict);
  require(v, tails > 0 && tails_ok == tails, "bound_rM dominance");
  require(v, expect > 0 && expect_ok == expect, "expected-R dominance");
  return v;
}

Verdict concentration_survey() {
  Verdict v;
  const auto t0 = std::chrono::steady_clock::now();
  const SurveyResult r = run_spectral_survey(quiet(ExperimentKind::SpectralSurvey, "c9"));
  const double secs = seconds_since(t0);
  const double target = 2.0 / std::numbers::pi;
  for (const SurveyRow& row : r.rows) note(v, "c=%g count=%.2f mid=%.3f", row.c, row.count, row.mid_fraction);
  note(v, "slope %.4f vs 2/pi %.4f", r.slope, target);
  require(v, r.N == 500, "N=500");
  require(v, std::abs(r.slope - target) <= 0.25 * target, "slope within 25% of 2/pi");
  bool seen = false;
  for (const SurveyRow& row : r.rows) {
    if (row.c != 20.0) continue;
    seen = true;
    require(v, row.mid_fraction <= 0.15, "mid-band fraction <= 0.15 at c=20");
  }
  require(v, seen, "c=20 present");
  note(v, "runtime %.1f s", secs);
  require(v, secs < 300.0, "runtime < 5 min");
  return v;
}

std::map<std::string, std::string> snapshot(const fs::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::directory_iterator(dir)) {
    std::ifstream in(e.path(), std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    out[e.path().filename().string()] = s.str();
  }
  return out;
}

Verdict determinism() {
  Verdict v;
  const ExperimentKind kinds[] = {ExperimentKind::Table1,         ExperimentKind::FixedCHistogram,
                                  ExperimentKind::HermiteApprox,  ExperimentKind::SpectralSurvey,
                                  ExperimentKind::BoundsReport,   ExperimentKind::PswfTable};
  for (ExperimentKind k : kinds) {
    ExperimentConfig cfg = default_config(k);
    cfg.emit_svg = false;
    cfg.output_dir = scratch("c10_" + to_string(k));
    run_experiment(cfg);
    const auto first = snapshot(cfg.output_dir);
    fs::remove_all(cfg.output_dir);
    run_experiment(cfg);
    const auto second = snapshot(cfg.output_dir);
    std::size_t bytes = 0;
    for (const auto& [name, data] : first) bytes += data.size();
    note(v, "%s: %zu files, %zu bytes", to_string(k).c_str(), first.size(), bytes);
    require(v, !first.empty() && first == second, "byte-identical rerun of " + to_string(k));
  }
  return v;
}

const std::vector<std::pair<std::string, std::function<Verdict()>>> kCriteria = {
    {"HS residual decay at c=1, N=5", residual_decay},
    {"trace identity", trace_identity},
    {"PSWF eigenvalues vs Nystrom", pswf_vs_nystrom},
    {"estimator rank", estimator_rank},
    {"Weyl gap", weyl_gap},
    {"fixed-c convergence", fixed_c_convergence},
    {"scaled-Hermite identity", hermite_identity},
    {"bounds evaluation", bounds_evaluation},
    {"spectral concentration survey", concentration_survey},
    {"determinism", determinism},
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"krm acceptance checks"};
  std::vector<int> which;
  app.add_option("--criterion", which, "criterion numbers (default: all)")->check(CLI::Range(1, 10));
  CLI11_PARSE(app, argc, argv);
  if (which.empty())
    for (int i = 1; i <= 10; ++i) which.push_back(i);

  int failures = 0;
  for (int id : which) {
    const auto& [name, run] = kCriteria[id - 1];
    Verdict v;
    try {
      v = run();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    std::printf("criterion %d %s: %s (%s)\n", id, v.pass ? "PASS" : "FAIL", name.c_str(), v.detail.c_str());
    std::fflush(stdout);
    if (!v.pass) ++failures;
  }
  fs::remove_all(fs::temp_directory_path() / ("krm_acceptance_" + std::to_string(::getpid())));
  return failures == 0 ? 0 : 1;
}
