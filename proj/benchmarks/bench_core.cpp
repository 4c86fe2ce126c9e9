#include "divcurve/portfolio.hpp"
#include "divcurve/report.hpp"
#include "divcurve/risk_div.hpp"
#include "divcurve/verification.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace divcurve;

namespace {

AssetUniverse universe_of_size(int n) {
    std::mt19937_64 rng(7);
    return random_universe(rng, n);
}

void BM_ComputeScalars(benchmark::State& state) {
    const auto u = universe_of_size(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(compute_scalars(u));
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ComputeScalars)->RangeMultiplier(4)->Range(4, 256)->Complexity();

void BM_OptimalWeights(benchmark::State& state) {
    const auto u = universe_of_size(static_cast<int>(state.range(0)));
    const auto s = compute_scalars(u);
    for (auto _ : state) {
        benchmark::DoNotOptimize(optimal_weights(s, u, RiskTolerance(2.0)));
    }
}
BENCHMARK(BM_OptimalWeights)->RangeMultiplier(4)->Range(4, 256);

void BM_SampleCurve(benchmark::State& state) {
    const auto s = compute_scalars(paper4_universe());
    const CurveSpec spec{Setting::RiskyOnly, Plane::VariancePlane, std::nullopt};
    const double lo = 1.0 / s.C;
    for (auto _ : state) {
        benchmark::DoNotOptimize(sample_curve(s, spec, lo, 200.0, static_cast<int>(state.range(0))));
    }
}
BENCHMARK(BM_SampleCurve)->Arg(401)->Arg(4001);

}  // namespace

BENCHMARK_MAIN();
