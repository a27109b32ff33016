#include <benchmark/benchmark.h>

#include <random>

#include "dmp/barrier_integrals.hpp"
#include "dmp/dual_functionals.hpp"
#include "dmp/measures.hpp"
#include "dmp/solver.hpp"

using namespace dmp;

namespace {

SymmetricPolytope polytope(int m, std::uint64_t seed = 1)
{
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<UnitVector> normals;
  for (int i = 0; i < m; ++i)
    normals.push_back(UnitVector::normalized(Vec::NullaryExpr(3, [&](Eigen::Index) { return g(rng); })));
  return SymmetricPolytope(normals, Vec::Ones(m));
}

void BM_BuildGrid(benchmark::State& state)
{
  for (auto _ : state)
    benchmark::DoNotOptimize(build_grid(3, static_cast<int>(state.range(0)), GridScheme::product_angle));
}
BENCHMARK(BM_BuildGrid)->Arg(64)->Arg(256);

void BM_GridCurvature(benchmark::State& state)
{
  const SymmetricPolytope K = polytope(static_cast<int>(state.range(0)));
  const SphericalGrid grid = build_grid(3, 128, GridScheme::product_angle);
  for (auto _ : state)
    benchmark::DoNotOptimize(dual_curvature(K, 2.5, grid));
}
BENCHMARK(BM_GridCurvature)->Arg(6)->Arg(12)->Arg(24);

void BM_ExactCurvature(benchmark::State& state)
{
  const SymmetricPolytope K = polytope(static_cast<int>(state.range(0)));
  for (auto _ : state)
    benchmark::DoNotOptimize(exact_pair_curvature(K, 2.5));
}
BENCHMARK(BM_ExactCurvature)->Arg(6)->Arg(12)->Arg(24);

void BM_VertexEnumeration(benchmark::State& state)
{
  const SymmetricPolytope K = polytope(static_cast<int>(state.range(0)));
  for (auto _ : state)
    benchmark::DoNotOptimize(enumerate_vertices(K.normal_matrix(), K.support_numbers()));
}
BENCHMARK(BM_VertexEnumeration)->Arg(12)->Arg(48);

void BM_SmiCheck(benchmark::State& state)
{
  const SymmetricPolytope K = polytope(static_cast<int>(state.range(0)));
  const DiscreteEvenMeasure mu = to_measure(dual_curvature_exact(K, 2.0));
  for (auto _ : state)
    benchmark::DoNotOptimize(smi_check(mu, 2.0));
}
BENCHMARK(BM_SmiCheck)->Arg(8)->Arg(16);

void BM_Solve(benchmark::State& state)
{
  const SymmetricPolytope K = polytope(static_cast<int>(state.range(0)), 7);
  const DiscreteEvenMeasure mu = to_measure(dual_curvature_exact(K, 2.5));
  SolveConfig cfg;
  cfg.q = 2.5;
  for (auto _ : state)
    benchmark::DoNotOptimize(maximize(mu, cfg));
}
BENCHMARK(BM_Solve)->Arg(6)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_BarrierTransformed(benchmark::State& state)
{
  Vec p(3);
  p << 0.2, 0.4, 0.7;
  const BarrierBody G = BarrierBody::aligned(4, 2, p);
  for (auto _ : state)
    benchmark::DoNotOptimize(barrier_quermass_transformed(G, 2.5, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_BarrierTransformed)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
