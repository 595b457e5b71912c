#include <doctest.h>

#include <algorithm>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "krm/basis.hpp"
#include "krm/bounds.hpp"
#include "krm/errors.hpp"
#include "krm/galerkin.hpp"
#include "krm/kernel.hpp"
#include "krm/pswf.hpp"
#include "krm/quadrature.hpp"
#include "krm/report.hpp"
#include "krm/rng.hpp"
#include "grid_oracles.hpp"

using namespace krm;
namespace mp = boost::multiprecision;
using Big = mp::cpp_bin_float_50;
using namespace krm_test;

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<double> eigs_desc(const Eigen::MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
  std::vector<double> v(es.eigenvalues().data(), es.eigenvalues().data() + m.rows());
  std::sort(v.rbegin(), v.rend());
  return v;
}

}  // namespace

TEST_CASE("gauss_legendre_rule small orders") {
  const QuadratureRule r1 = gauss_legendre_rule(1);
  CHECK(r1.order == 1);
  CHECK(r1.nodes[0] == doctest::Approx(0.0));
  CHECK(r1.weights[0] == doctest::Approx(2.0).epsilon(1e-15));

  const QuadratureRule r2 = gauss_legendre_rule(2);
  CHECK(std::abs(r2.nodes[0] + 1.0 / std::sqrt(3.0)) <= 1e-15);
  CHECK(std::abs(r2.nodes[1] - 1.0 / std::sqrt(3.0)) <= 1e-15);
  CHECK(std::abs(r2.weights[0] - 1.0) <= 1e-15);
  CHECK(std::abs(r2.weights[1] - 1.0) <= 1e-15);

  const QuadratureRule r20 = gauss_legendre_rule(20);
  double s = 0.0;
  for (int i = 0; i < 20; ++i) s += r20.weights[i] * std::pow(r20.nodes[i], 10);
  CHECK(std::abs(s - 2.0 / 11.0) <= 1e-14);

  CHECK_THROWS_AS(gauss_legendre_rule(0), DomainError);
  CHECK_THROWS_AS(gauss_legendre_rule(kMaxGaussOrder + 1), DomainError);
}

TEST_CASE("gauss_legendre_rule structure and monomial exactness") {
  for (int K : {3, 8, 33, 100, 1000, kMaxGaussOrder}) {
    const QuadratureRule r = gauss_legendre_rule(K);
    REQUIRE(static_cast<int>(r.nodes.size()) == K);
    double sum = 0.0;
    for (double w : r.weights) {
      CHECK(w > 0.0);
      sum += w;
    }
    CHECK(std::abs(sum - 2.0) <= 1e-13);
    for (int i = 0; i < K; ++i) {
      CHECK(r.nodes[i] > -1.0);
      CHECK(r.nodes[i] < 1.0);
      if (i + 1 < K) CHECK(r.nodes[i] < r.nodes[i + 1]);
      CHECK(r.nodes[i] == -r.nodes[K - 1 - i]);
      CHECK(r.weights[i] == r.weights[K - 1 - i]);
    }
    if (K > 200) continue;
    for (int d = 0; d <= 2 * K - 1; ++d) {
      double s = 0.0;
      for (int i = 0; i < K; ++i) s += r.weights[i] * std::pow(r.nodes[i], d);
      const double exact = d % 2 ? 0.0 : 2.0 / (d + 1);
      CHECK(std::abs(s - exact) <= 1e-13);
    }
  }
}

TEST_CASE("gauss_legendre_rule agrees with Golub-Welsch") {
  for (int K : {7, 30, 64}) {
    const QuadratureRule r = gauss_legendre_rule(K);
    Grid g = golub_welsch(K, -1.0, 1.0);
    for (int i = 0; i < K; ++i) {
      CHECK(std::abs(r.nodes[i] - g.x[i]) <= 1e-14);
      CHECK(std::abs(r.weights[i] - g.w[i]) <= 1e-13);
    }
  }
  const QuadratureRule m = gauss_legendre_rule(12, 0.0, 2.0);
  double s = 0.0;
  for (int i = 0; i < 12; ++i) s += m.weights[i] * m.nodes[i] * m.nodes[i];
  CHECK(std::abs(s - 8.0 / 3.0) <= 1e-14);
}

TEST_CASE("sinc_eval examples") {
  CHECK(sinc_eval(5.0, 0.0) == 1.0);
  CHECK(std::abs(sinc_eval(kPi, 1.0)) <= 1e-15);
  CHECK(std::abs(sinc_eval(1.0, 0.5) - std::sin(0.5) / 0.5) <= 1e-16);
  CHECK(sinc_eval(1.0, 0.5) == doctest::Approx(0.958851).epsilon(1e-6));
}

TEST_CASE("sinc_eval relative error against 50-digit evaluation") {
  std::vector<std::pair<double, double>> args;
  for (double c : {1e-3, 0.3, 1.0, 6.0, 37.5, 100.0}) {
    for (int i = -400; i <= 400; ++i) args.emplace_back(c, i / 200.0 + 1e-3);
    for (int k = 1; k * kPi <= 2.0 * c; ++k) {
      const double u = k * kPi / c;  // near a zero of sin
      args.emplace_back(c, u);
      args.emplace_back(c, std::nextafter(u, 3.0));
      args.emplace_back(c, -u);
    }
    for (double u : {1e-20, 3e-9, 1e-6 / c, 0.99e-4 / c, 1.01e-4 / c}) args.emplace_back(c, u);
  }
  const CounterRng rng(2024);
  for (std::uint64_t i = 0; i < 4000; ++i) {
    const double c = std::pow(10.0, -3.0 + 7.0 * rng.uniform01(2 * i));
    args.emplace_back(c, 4.0 * rng.uniform01(2 * i + 1) - 2.0);
  }
  double worst = 0.0;
  for (auto [c, u] : args) {
    const Big x = Big(c) * Big(u);
    const Big exact = x == 0 ? Big(1) : mp::sin(x) / x;
    const double got = sinc_eval(c, u);
    if (exact == 0) continue;
    const double rel = static_cast<double>(mp::abs((Big(got) - exact) / exact));
    worst = std::max(worst, rel);
  }
  CHECK(worst <= 1e-15);
}

TEST_CASE("sinc L2 norm against a composite tensor quadrature") {
  for (double c : {1.0, 6.0, 20.0}) {
    const Grid g = composite(40, 20, -1.0, 1.0);
    double s = 0.0;
    for (std::size_t i = 0; i < g.x.size(); ++i) {
      for (std::size_t j = 0; j < g.x.size(); ++j) {
        const double v = plain_sinc(c * (g.x[i] - g.x[j]));
        s += g.w[i] * g.w[j] * v * v;
      }
    }
    CHECK(std::abs(sinc_l2_norm(c) - std::sqrt(s)) <= 1e-12);
    const KernelSpec k = KernelSpec::sinc(c);
    CHECK(k.sup_bound() == 1.0);
    CHECK(k(0.3, 0.3) == 1.0);
    CHECK(k.l2_norm() == sinc_l2_norm(c));
  }
  CHECK_THROWS_AS(KernelSpec::sinc(0.0), DomainError);
  CHECK_THROWS_AS(KernelSpec::custom([](double, double) { return 1.0; }, 0.0, 1.0), DomainError);
}

TEST_CASE("assemble_T examples") {
  const KernelSpec one = KernelSpec::custom([](double, double) { return 1.0; }, 1.0, 2.0, "one");
  const TMatrix t1 = assemble_T(one, BasisId::legendre(), 2);
  CHECK(std::abs(t1.entries(0, 0) - 2.0) <= 1e-13);
  CHECK(std::abs(t1.entries(0, 1)) <= 1e-13);
  CHECK(std::abs(t1.entries(1, 0)) <= 1e-13);
  CHECK(std::abs(t1.entries(1, 1)) <= 1e-13);

  const KernelSpec s1 = KernelSpec::sinc(1.0);
  const TMatrix t2 = assemble_T(s1, BasisId::legendre(), 2);
  CHECK(std::abs(t2.entries(0, 1)) <= 1e-13);

  const TMatrix t4 = assemble_T(s1, BasisId::legendre(), 4, gauss_legendre_rule(64));
  const TMatrix o4 = assemble_T_sinc_oracle(1.0, 4);
  CHECK((t4.entries - o4.entries).cwiseAbs().maxCoeff() <= 1e-10);

  CHECK(assemble_T_sinc_oracle(0.7, 2).entries(0, 1) == 0.0);
  CHECK(assemble_T_sinc_oracle(13.0, 2).entries(1, 0) == 0.0);
  CHECK(std::abs(assemble_T_sinc_oracle(1e-6, 1).entries(0, 0) - 2.0) <= 1e-6);
}

TEST_CASE("assemble_T refuses coarse rules") {
  const KernelSpec s = KernelSpec::sinc(10.0);
  CHECK(required_quadrature_order(s, BasisId::legendre(), 5) == static_cast<int>(std::ceil(std::numbers::e * 10.0)) + 20);
  CHECK(required_quadrature_order(s, BasisId::legendre(), 40) == 80);
  CHECK_THROWS_AS(assemble_T(s, BasisId::legendre(), 5, gauss_legendre_rule(47)), ResolutionError);
  CHECK_NOTHROW(assemble_T(s, BasisId::legendre(), 5, gauss_legendre_rule(48)));
  CHECK_THROWS_AS(assemble_T(s, BasisId::legendre(), 0), DomainError);
  CHECK_THROWS_AS(assemble_T(s, BasisId::prolate(10.0), 5), DomainError);
  CHECK_THROWS_AS(assemble_T_sinc_oracle(1.0, 201), DomainError);
}

TEST_CASE("assemble_T matches the spherical-Bessel oracle for c <= 20, M <= 30") {
  for (double c : {0.5, 1.0, 5.0, 12.0, 20.0}) {
    const TMatrix oracle = assemble_T_sinc_oracle(c, 30);
    for (int M : {1, 6, 17, 30}) {
      const TMatrix t = assemble_T(KernelSpec::sinc(c), BasisId::legendre(), M);
      CHECK((t.entries - oracle.entries.topLeftCorner(M, M)).cwiseAbs().maxCoeff() <= 1e-10);
    }
  }
}

TEST_CASE("scaled-Hermite assembly matches a direct composite quadrature at c = 100, M = 50") {
  const double c = 100.0;
  const int M = 50;
  const Grid g = composite(60, 30, -1.0, 1.0);
  const int n = static_cast<int>(g.x.size());
  Eigen::MatrixXd F(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) F(i, j) = plain_sinc(c * (g.x[i] - g.x[j]));
  Eigen::MatrixXd wphi(n, M);
  std::vector<double> v(M);
  for (int i = 0; i < n; ++i) {
    hermite_scaled_values(c, g.x[i], v);
    for (int m = 0; m < M; ++m) wphi(i, m) = g.w[i] * v[m];
  }
  const Eigen::MatrixXd direct = wphi.transpose() * F * wphi;
  const TMatrix t = assemble_T(KernelSpec::sinc(c), BasisId::scaled_hermite(c), M);
  CHECK((t.entries - direct).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("assembled T_M is symmetric, PSD and parity-sparse") {
  struct Case {
    double c;
    BasisId basis;
    int M;
  };
  const std::vector<Case> cases{{1.0, BasisId::legendre(), 10},  {5.0, BasisId::legendre(), 30},
                                {20.0, BasisId::legendre(), 40}, {40.0, BasisId::scaled_hermite(40.0), 20},
                                {100.0, BasisId::scaled_hermite(100.0), 50}};
  for (const Case& cs : cases) {
    const TMatrix t = assemble_T(KernelSpec::sinc(cs.c), cs.basis, cs.M);
    CHECK((t.entries - t.entries.transpose()).cwiseAbs().maxCoeff() <= 1e-13);
    const std::vector<double> ev = eigs_desc(t.entries);
    CHECK(ev.back() >= -1e-10 * ev.front());
    for (int k = 0; k < cs.M; ++k)
      for (int l = 0; l < cs.M; ++l)
        if ((k + l) % 2) CHECK(std::abs(t.entries(k, l)) <= 1e-13);
  }
}

TEST_CASE("trace of T_M increases in M and reaches 2") {
  for (double c : {5.0, 10.0, 20.0}) {
    const int top = landau_widom_M(c, 12.0);
    double prev = 0.0;
    for (int M = 1; M <= top; ++M) {
      const double tr = assemble_T(KernelSpec::sinc(c), BasisId::legendre(), M).entries.trace();
      CHECK(tr >= prev - 1e-14);
      prev = tr;
    }
    CHECK(std::abs(prev - 2.0) <= 1e-6);
  }
  // c = 1 converges as well, only past the landau_widom_M(1, 12) = 4 cut-off.
  const double tr1 = assemble_T(KernelSpec::sinc(1.0), BasisId::legendre(), 8).entries.trace();
  CHECK(std::abs(tr1 - 2.0) <= 1e-6);
}

TEST_CASE("Legendre and scaled-Hermite spectra agree once both resolve the kernel") {
  for (double c : {20.0, 40.0}) {
    const int Mh = static_cast<int>(c / 2);
    const std::vector<double> leg =
        eigs_desc(assemble_T(KernelSpec::sinc(c), BasisId::legendre(), landau_widom_M(c, 12.0)).entries);
    const std::vector<double> her =
        eigs_desc(assemble_T(KernelSpec::sinc(c), BasisId::scaled_hermite(c), Mh).entries);
    for (int j = 0; j < Mh / 2; ++j) CHECK(std::abs(leg[j] - her[j]) <= 1e-6);
  }
}

TEST_CASE("pswf_solve examples") {
  const PswfSet s5 = pswf_solve(5.0, 40);
  CHECK(s5.count <= 30);
  CHECK(s5.count >= 10);
  double sum = 0.0;
  for (double l : s5.lambdas) sum += l;
  CHECK(std::abs(sum - 10.0 / kPi) <= 1e-6);

  const PswfSet s10 = pswf_solve(10.0, landau_widom_M(10.0, 8.0) + 10);
  const long big = std::count_if(s10.lambdas.begin(), s10.lambdas.end(), [](double l) { return l >= 0.5; });
  CHECK((big == 6 || big == 7));

  const std::vector<double> ref = nystrom_lambdas(5.0, 10);
  REQUIRE(s5.count >= 10);
  for (int n = 0; n < 10; ++n) CHECK(std::abs(s5.lambdas[n] - ref[n]) <= 1e-8);

  CHECK_THROWS_AS(pswf_solve(10.0, landau_widom_M(10.0, 8.0) - 1), ResolutionError);
  CHECK_THROWS_AS(pswf_solve(0.1, 10), ResolutionError);
  CHECK_THROWS_AS(pswf_solve(-1.0, 40), DomainError);
}

TEST_CASE("pswf eigenvalues against the independent Nystrom oracle") {
  for (double c : {2.0, 5.0, 10.0}) {
    const PswfSet set = pswf_solve(c, std::max(landau_widom_M(c, 8.0), 11) + 10);
    const std::vector<double> ref = nystrom_lambdas(c, 10);
    const QuadratureRule grid = gauss_legendre_rule(2000);
    const std::vector<double> lib = nystrom_sinc_eigenvalues(c, grid, 10);
    REQUIRE(set.count >= 10);
    for (int n = 0; n < 10; ++n) {
      CHECK(std::abs(set.lambdas[n] - ref[n]) <= 1e-8);
      CHECK(std::abs(lib[n] - ref[n]) <= 1e-8);
    }
    const long big = std::count_if(set.lambdas.begin(), set.lambdas.end(), [](double l) { return l >= 0.5; });
    CHECK(std::abs(big - std::lround(2.0 * c / kPi)) <= 1);
  }
}

TEST_CASE("pswf set invariants") {
  for (double c : {2.0, 5.0, 10.0, 30.0}) {
    const PswfSet set = pswf_solve(c, landau_widom_M(c, 8.0) + 15);
    REQUIRE(set.count >= 1);
    REQUIRE(set.count <= set.M - 10);
    for (int n = 0; n < set.count; ++n) {
      CHECK(set.lambdas[n] > 0.0);
      CHECK(set.lambdas[n] < 1.0);
      if (n + 1 < set.count) {
        if (c <= 10.0) {
          CHECK(set.lambdas[n] > set.lambdas[n + 1]);
        } else {
          CHECK(set.lambdas[n] >= set.lambdas[n + 1]);
        }
      }
    }
    const Eigen::MatrixXd gram = set.coeffs.transpose() * set.coeffs;
    CHECK((gram - Eigen::MatrixXd::Identity(set.count, set.count)).cwiseAbs().maxCoeff() <= 1e-10);
    for (int n = 0; n < set.count; ++n) {
      Eigen::Index arg = 0;
      set.coeffs.col(n).cwiseAbs().maxCoeff(&arg);
      CHECK(set.coeffs(arg, n) > 0.0);
      for (int k = 0; k < set.M; ++k)
        if ((k + n) % 2) CHECK(std::abs(set.coeffs(k, n)) <= 1e-10);
    }
    const TMatrix d = pswf_T(set, set.count);
    for (int n = 0; n < set.count; ++n) CHECK(d.entries(n, n) == doctest::Approx(kPi / c * set.lambdas[n]));
  }
}

TEST_CASE("pswf_eval parity, normalization and Fredholm residual") {
  const double c = 5.0;
  const PswfSet set = pswf_solve(c, 40);
  for (double x : {0.0, 0.2, 0.63, 1.0}) CHECK(std::abs(pswf_eval(set, 1, x) + pswf_eval(set, 1, -x)) <= 1e-9);

  const QuadratureRule r = gauss_legendre_rule(200);
  double norm = 0.0;
  for (int i = 0; i < r.order; ++i) {
    const double p = pswf_eval(set, 0, r.nodes[i]);
    norm += r.weights[i] * p * p;
  }
  CHECK(std::abs(norm - 1.0) <= 1e-9);

  std::vector<double> psi(r.order);
  for (int i = 0; i < r.order; ++i) psi[i] = pswf_eval(set, 0, r.nodes[i]);
  double sup = 0.0;
  for (int k = 0; k <= 100; ++k) {
    const double x = -1.0 + k / 50.0;
    double applied = 0.0;
    for (int i = 0; i < r.order; ++i) applied += r.weights[i] * plain_sinc(c * (x - r.nodes[i])) * psi[i];
    sup = std::max(sup, std::abs(applied - kPi / c * set.lambdas[0] * pswf_eval(set, 0, x)));
  }
  CHECK(sup <= 1e-7);

  const std::vector<double> xs{-0.5, 0.25};
  const Eigen::MatrixXd m = pswf_eval_matrix(set, 3, xs);
  CHECK(m(1, 2) == pswf_eval(set, 2, 0.25));
  CHECK_THROWS_AS(pswf_eval(set, set.count, 0.1), DomainError);
  CHECK_THROWS_AS(pswf_eval_matrix(set, set.count + 1, xs), DomainError);
}

TEST_CASE("residual_tail_norm") {
  const KernelSpec s1 = KernelSpec::sinc(1.0);
  const QuadratureRule rule = gauss_legendre_rule(160);
  CHECK(residual_tail_norm(s1, BasisId::legendre(), 60, 60, rule).value == 0.0);
  CHECK(residual_tail_norm(s1, BasisId::legendre(), 70, 60, rule).value == 0.0);

  const TailNorm t4 = residual_tail_norm(s1, BasisId::legendre(), 4, 60, rule);
  CHECK(t4.M_big == 60);
  const BoundReport b = bound_rM(1.0, 4, s1.l2_norm());
  REQUIRE(b.valid);
  CHECK(t4.value <= b.value);

  const TMatrix big = assemble_T_sinc_oracle(1.0, 60);
  double sum = 0.0;
  for (int k = 0; k < 60; ++k)
    for (int l = 0; l < 60; ++l)
      if (k >= 4 || l >= 4) sum += big.entries(k, l) * big.entries(k, l);
  CHECK(std::abs(t4.value - std::sqrt(sum)) <= 1e-9);

  double prev = std::numeric_limits<double>::infinity();
  for (int M = 1; M <= 30; ++M) {
    const double v = residual_tail_norm(s1, BasisId::legendre(), M, 60, rule).value;
    CHECK(v <= prev);
    prev = v;
  }

  CHECK_THROWS_AS(residual_tail_norm(s1, BasisId::legendre(), 40, 60, rule), ResolutionError);
  const KernelSpec s20 = KernelSpec::sinc(20.0);
  CHECK_THROWS_AS(residual_tail_norm(s20, BasisId::legendre(), 4, 20, gauss_legendre_rule(200)), ResolutionError);
}

TEST_CASE("T_M and PSWF sets serialize to JSON") {
  const TMatrix t = assemble_T(KernelSpec::sinc(2.0), BasisId::legendre(), 3);
  const report::Json j = report::to_json(t);
  CHECK(j["M"] == 3);
  CHECK(j["c"] == 2.0);
  CHECK(j["entries"].size() == 9);
  CHECK(j["entries"][1].get<double>() == t.entries(0, 1));

  const PswfSet set = pswf_solve(2.0, 15);
  const report::Json p = report::to_json(set);
  CHECK(p["count"] == set.count);
  CHECK(p["lambdas"].size() == static_cast<std::size_t>(set.count));
  CHECK(p["coeffs"].size() == static_cast<std::size_t>(set.M * set.count));
  CHECK(p["basis"] == "legendre");
}
