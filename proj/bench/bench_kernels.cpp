#include <benchmark/benchmark.h>

#include <vector>

#include "krm/kernels.hpp"
#include "krm/quadrature.hpp"
#include "krm/randmat.hpp"

using namespace krm;

namespace {

std::vector<double> points(int n) { return draw_samples(n, Distribution::Uniform, 11).xs; }

template <Eigen::MatrixXd (*Fill)(const KernelSpec&, std::span<const double>)>
void BM_fill_symmetric(benchmark::State& state) {
  const KernelSpec k = KernelSpec::sinc(20.0);
  const std::vector<double> xs = points(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(Fill(k, xs));
  state.SetItemsProcessed(state.iterations() * state.range(0) * (state.range(0) + 1) / 2);
}

template <Eigen::MatrixXd (*Rows)(const BasisId&, int, std::span<const double>)>
void BM_basis_rows(benchmark::State& state) {
  const std::vector<double> xs = points(static_cast<int>(state.range(0)));
  const BasisId b = BasisId::legendre();
  for (auto _ : state) benchmark::DoNotOptimize(Rows(b, 40, xs));
  state.SetItemsProcessed(state.iterations() * state.range(0) * 40);
}

template <Eigen::MatrixXd (*Galerkin)(const KernelSpec&, const Eigen::MatrixXd&, const QuadratureRule&)>
void BM_galerkin(benchmark::State& state) {
  const int M = static_cast<int>(state.range(0));
  const KernelSpec k = KernelSpec::sinc(20.0);
  const QuadratureRule rule = gauss_legendre_rule(2 * M + 40);
  const Eigen::MatrixXd phi = kernels::serial::basis_rows(BasisId::legendre(), M, rule.nodes);
  for (auto _ : state) benchmark::DoNotOptimize(Galerkin(k, phi, rule));
}

template <double (*Norm)(const Eigen::MatrixXd&)>
void BM_frobenius(benchmark::State& state) {
  const Eigen::MatrixXd a = Eigen::MatrixXd::Random(state.range(0), state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(Norm(a));
}

}  // namespace

BENCHMARK(BM_fill_symmetric<kernels::serial::fill_symmetric>)->Name("fill_symmetric/serial")->Arg(500)->Arg(2000);
BENCHMARK(BM_fill_symmetric<kernels::omp::fill_symmetric>)->Name("fill_symmetric/omp")->Arg(500)->Arg(2000);
BENCHMARK(BM_basis_rows<kernels::serial::basis_rows>)->Name("basis_rows/serial")->Arg(2000)->Arg(10000);
BENCHMARK(BM_basis_rows<kernels::omp::basis_rows>)->Name("basis_rows/omp")->Arg(2000)->Arg(10000);
BENCHMARK(BM_galerkin<kernels::serial::galerkin>)->Name("galerkin/serial")->Arg(20)->Arg(60);
BENCHMARK(BM_galerkin<kernels::omp::galerkin>)->Name("galerkin/omp")->Arg(20)->Arg(60);
BENCHMARK(BM_frobenius<kernels::serial::frobenius_norm>)->Name("frobenius/serial")->Arg(1000);
BENCHMARK(BM_frobenius<kernels::omp::frobenius_norm>)->Name("frobenius/omp")->Arg(1000);

BENCHMARK_MAIN();
