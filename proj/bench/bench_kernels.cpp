#include "hadprox/kernels.hpp"
#include "hadprox/manifold.hpp"
#include "hadprox/problem.hpp"
#include "hadprox/subsolver.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace hadprox;

namespace {

double bowl(double x, double y) { return std::max((x - 0.3) * (x - 0.3) + y * y, x * x + (y + 0.2) * (y + 0.2)); }

void BM_GridArgminSerial(benchmark::State& state) {
  const auto g = kernels::Grid2D::with_step(-1, 1, -1, 1, 2.0 / double(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(kernels::grid_argmin_serial(g, bowl));
  state.SetItemsProcessed(state.iterations() * g.size());
}

void BM_GridArgminParallel(benchmark::State& state) {
  const auto g = kernels::Grid2D::with_step(-1, 1, -1, 1, 2.0 / double(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(kernels::grid_argmin_parallel(g, bowl));
  state.SetItemsProcessed(state.iterations() * g.size());
}

kernels::ValueTable table(kernels::Index rows) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0, 1);
  kernels::ValueTable t{rows, 2, {}};
  for (kernels::Index i = 0; i < rows * 2; ++i) t.data.push_back(u(rng));
  // Candidate 0 is undominated so the whole table is scanned.
  t.data[0] = t.data[1] = 0;
  return t;
}

void BM_DominatorSerial(benchmark::State& state) {
  const auto t = table(state.range(0));
  const std::vector<double> gens{1, 0, 0, 1};
  for (auto _ : state) benchmark::DoNotOptimize(kernels::first_strict_dominator_serial(t, 0, gens, 1e-12));
  state.SetItemsProcessed(state.iterations() * t.rows);
}

void BM_DominatorParallel(benchmark::State& state) {
  const auto t = table(state.range(0));
  const std::vector<double> gens{1, 0, 0, 1};
  for (auto _ : state) benchmark::DoNotOptimize(kernels::first_strict_dominator_parallel(t, 0, gens, 1e-12));
  state.SetItemsProcessed(state.iterations() * t.rows);
}

void BM_HyperboloidExpLog(benchmark::State& state) {
  const auto H = ManifoldId::hyperboloid(static_cast<int>(state.range(0)));
  std::mt19937_64 rng(2);
  const ManifoldPoint p = random_point(H, rng, 2), q = random_point(H, rng, 2);
  for (auto _ : state) benchmark::DoNotOptimize(exp(log(p, q)));
}

void BM_SqpSubproblem(benchmark::State& state) {
  const auto H = ManifoldId::hyperboloid(2);
  std::mt19937_64 rng(3);
  const VectorObjective F = builtin::squared_distances(H, {random_point(H, rng, 1), random_point(H, rng, 1)});
  const GeneratorSet Z = GeneratorSet::orthant(2);
  const SubproblemSpec spec{std::cref(F), random_point(H, rng, 2), 1.0, uniform_direction(Z), Z, InnerConfig{}};
  for (auto _ : state) benchmark::DoNotOptimize(solve_subproblem(spec));
}

}  // namespace

BENCHMARK(BM_GridArgminSerial)->Arg(200)->Arg(2000);
BENCHMARK(BM_GridArgminParallel)->Arg(200)->Arg(2000);
BENCHMARK(BM_DominatorSerial)->Arg(40000)->Arg(1000000);
BENCHMARK(BM_DominatorParallel)->Arg(40000)->Arg(1000000);
BENCHMARK(BM_HyperboloidExpLog)->Arg(2)->Arg(16);
BENCHMARK(BM_SqpSubproblem);

BENCHMARK_MAIN();
