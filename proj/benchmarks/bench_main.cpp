#include "kvnlab/kvnlab.hpp"

#include <benchmark/benchmark.h>

using namespace kvnlab;

static void BM_SchrodingerStep(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const Grid1D g(n, -20.0, 20.0);
    auto psi = gaussian_packet(g, 0.0, 1.0, 1.0);
    const SplitStepper s(hamiltonian(g, Potential::quartic(0.25)), 1e-3);
    for (auto _ : state) {
        s.step(psi.amplitudes);
        benchmark::DoNotOptimize(psi.amplitudes.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<long long>(n));
}
BENCHMARK(BM_SchrodingerStep)->RangeMultiplier(4)->Range(256, 16384);

static void BM_KvnStep(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const PhaseGrid pg(Grid1D(n, -6.0, 6.0), Grid1D(n, -8.0, 8.0));
    auto psi = kvn_gaussian(pg, 1.0, 0.5, 0.4, 0.4);
    const SplitStepper s(liouvillian(pg, Potential::quartic(0.25)), 1e-3);
    for (auto _ : state) {
        s.step(psi.amplitudes);
        benchmark::DoNotOptimize(psi.amplitudes.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<long long>(n * n));
}
BENCHMARK(BM_KvnStep)->RangeMultiplier(2)->Range(64, 512);

static void BM_UnifiedStep(benchmark::State& state) {
    const PhaseGrid pg(Grid1D(256, -6.0, 6.0), Grid1D(256, -8.0, 8.0));
    auto psi = kvn_gaussian(pg, 1.0, 0.5, 0.4, 0.4);
    const SplitStepper s(unified_generator(pg, Potential::quartic(0.25), 0.5), 1e-3);
    for (auto _ : state) {
        s.step(psi.amplitudes);
        benchmark::DoNotOptimize(psi.amplitudes.data());
    }
}
BENCHMARK(BM_UnifiedStep);

static void BM_Wigner(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const Grid1D g(n, -10.0, 10.0);
    const auto psi = harmonic_eigenstate(g, 1);
    const auto pg = wigner_grid(g);
    for (auto _ : state) {
        benchmark::DoNotOptimize(wigner_transform(psi, pg).data());
    }
}
BENCHMARK(BM_Wigner)->RangeMultiplier(2)->Range(64, 512);

static void BM_KernelPropagation(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const Grid1D g(n, -20.0, 20.0);
    const auto psi = gaussian_packet(g, 0.0, 1.0, 1.0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(propagate_by_kernel(psi, 1.0, 1.0).amplitudes.data());
    }
}
BENCHMARK(BM_KernelPropagation)->RangeMultiplier(2)->Range(256, 2048);

static void BM_BesselJ(benchmark::State& state) {
    double x = 0.1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(gauge::bessel_j(0.37, x));
        x = x < 30.0 ? x + 0.37 : 0.1;
    }
}
BENCHMARK(BM_BesselJ);

static void BM_LowestZero(benchmark::State& state) {
    double nu = 0.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(gauge::lowest_zero(nu));
        nu = nu < 5.0 ? nu + 0.013 : 0.0;
    }
}
BENCHMARK(BM_LowestZero);
BENCHMARK_MAIN();
