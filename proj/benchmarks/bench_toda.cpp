#include <benchmark/benchmark.h>

#include <cmath>
#include <complex>
#include <vector>

#include "toda/asymptotics.hpp"
#include "toda/quad.hpp"
#include "toda/solution.hpp"

namespace {

using C = std::complex<double>;

toda::TodaSolution make_solution(int n) {
  std::vector<double> g(n, 0.0);
  g[0] = 1.0;
  const auto cd = toda::build_cartan(n, g);
  toda::SolutionParams p(n);
  p.lambda.assign(n + 1, std::pow(cd.lambda_product(), 1.0 / (n + 1)));
  for (int i = 1; i <= n; ++i)
    for (int j = 0; j < i; ++j)
      if (toda::coefficient_allowed(cd, i, j)) p.set_c(i, j, {0.3 / i, 0.1 * j});
  return toda::TodaSolution(cd, toda::validate_params(cd, p, true).params);
}

void BM_LogDet(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto sol = make_solution(n);
  const C z(1.3, -0.7);
  for (auto _ : state) benchmark::DoNotOptimize(sol.log_det(n, z));
}
BENCHMARK(BM_LogDet)->DenseRange(1, 5);

void BM_LogDetExtended(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto sol = make_solution(n).with_precision(toda::Precision::Extended);
  const C z(1.3, -0.7);
  for (auto _ : state) benchmark::DoNotOptimize(sol.log_det(n, z));
}
BENCHMARK(BM_LogDetExtended)->DenseRange(1, 5);

void BM_DirectDeterminant(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto sol = make_solution(n);
  const C z(1.3, -0.7);
  for (auto _ : state) benchmark::DoNotOptimize(sol.direct_determinant(n, z));
}
BENCHMARK(BM_DirectDeterminant)->DenseRange(1, 5);

void BM_Potentials(benchmark::State& state) {
  const auto sol = make_solution(static_cast<int>(state.range(0)));
  const C z(4.0, 2.5);
  for (auto _ : state) benchmark::DoNotOptimize(sol.potentials(z));
}
BENCHMARK(BM_Potentials)->DenseRange(1, 4);

void BM_PdeResidual(benchmark::State& state) {
  const auto sol = make_solution(static_cast<int>(state.range(0)));
  const C z(0.8, 1.9);
  for (auto _ : state) benchmark::DoNotOptimize(sol.pde_residuals(z, 1e-3));
}
BENCHMARK(BM_PdeResidual)->DenseRange(1, 3);

void BM_Mass(benchmark::State& state) {
  const auto sol = make_solution(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(toda::mass(sol, 1, 1e3));
}
BENCHMARK(BM_Mass)->DenseRange(1, 2)->Unit(benchmark::kMillisecond);

void BM_FitExpansion(benchmark::State& state) {
  const auto sol = make_solution(3).with_precision(toda::Precision::Extended);
  const auto grid = toda::FitGrid::log_spaced(1e3, 1e4);
  for (auto _ : state) benchmark::DoNotOptimize(toda::fit_expansion(sol, 1, grid));
}
BENCHMARK(BM_FitExpansion)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
