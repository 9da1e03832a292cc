// Parallel vs serial grid evaluation of the continued fraction and the
// Stieltjes transform.
#include "laxkit/jacobispec.hpp"

#include <benchmark/benchmark.h>

#include <complex>
#include <vector>

namespace {

using laxkit::PeriodicJacobi;

PeriodicJacobi matrix() { return {{0.9, 1.3, 0.7, 1.1}, {0.2, -0.4, 0.5, -0.1}}; }

std::vector<std::complex<double>> grid(int n) {
    std::vector<std::complex<double>> zs;
    for (int i = 0; i < n; ++i) zs.emplace_back(-4.0 + 8.0 * i / n, 1.0 + (i % 7) * 0.25);
    return zs;
}

void BM_FractionGrid(benchmark::State& state) {
    auto m = matrix();
    auto zs = grid(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(laxkit::gamma_fraction_grid(m, zs, 200));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_FractionGridSerial(benchmark::State& state) {
    auto m = matrix();
    auto zs = grid(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(laxkit::gamma_fraction_grid_serial(m, zs, 200));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_StieltjesGrid(benchmark::State& state) {
    auto mu = laxkit::measure_decompose(matrix());
    auto zs = grid(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(laxkit::stieltjes_grid(mu, zs));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_StieltjesGridSerial(benchmark::State& state) {
    auto mu = laxkit::measure_decompose(matrix());
    auto zs = grid(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(laxkit::stieltjes_grid_serial(mu, zs));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_MeasureDecompose(benchmark::State& state) {
    auto m = matrix();
    for (auto _ : state) benchmark::DoNotOptimize(laxkit::measure_decompose(m));
}

}  // namespace

BENCHMARK(BM_FractionGrid)->Arg(256)->Arg(4096)->UseRealTime();
BENCHMARK(BM_FractionGridSerial)->Arg(256)->Arg(4096)->UseRealTime();
BENCHMARK(BM_StieltjesGrid)->Arg(64)->Arg(512)->UseRealTime();
BENCHMARK(BM_StieltjesGridSerial)->Arg(64)->Arg(512)->UseRealTime();
BENCHMARK(BM_MeasureDecompose);

BENCHMARK_MAIN();
