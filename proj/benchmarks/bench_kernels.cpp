// Microbenchmarks for the hot paths: the stencil, the fused network step and
// the path-load computation.
#include <benchmark/benchmark.h>

#include "rdsync/simulator.hpp"
#include "rdsync/sync_theory.hpp"

using namespace rdsync;

namespace {

Field random_field(const Grid& g, std::uint64_t seed) {
    Field f(g);
    for (int c = 0; c < f.size(); ++c) {
        f.data()[c] = detail::uniform_sample(seed, static_cast<std::uint64_t>(c), -1.0, 1.0);
    }
    return f;
}

void BM_laplacian(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    Grid g(n, n, 100.0, 100.0);
    Field f = random_field(g, 1);
    for (auto _ : state) {
        Field lap = laplacian_neumann(f);
        benchmark::DoNotOptimize(lap.data());
    }
    state.SetItemsProcessed(state.iterations() * g.cell_count());
}

void BM_network_step(benchmark::State& state) {
    const int cells = static_cast<int>(state.range(0));
    const int nodes = static_cast<int>(state.range(1));
    SimConfig cfg;
    cfg.grid = Grid(cells, cells, 100.0, 100.0);
    cfg.coupling = complete_network(nodes, 0.02);
    cfg.dt = 0.004;
    NetworkState s = make_initial(cfg.ic, cfg.grid, nodes, 7);
    Stepper stepper(cfg);
    for (auto _ : state) {
        stepper.step(s);
    }
    state.SetItemsProcessed(state.iterations() * cfg.grid.cell_count() * nodes);
}

void BM_diagnostics_sample(benchmark::State& state) {
    SimConfig cfg;
    cfg.grid = Grid(64, 64, 100.0, 100.0);
    cfg.coupling = complete_network(4, 0.02);
    NetworkState s = make_initial(cfg.ic, cfg.grid, 4, 11);
    for (auto _ : state) {
        TraceSample sample = sample_diagnostics(s);
        benchmark::DoNotOptimize(sample.e_total);
    }
}

void BM_alpha_ring(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    CouplingMatrix g = ring_unidirectional(n, 1.0);
    for (auto _ : state) {
        AlphaTable t = alpha_coefficients(g, TieBreak::lexicographic);
        benchmark::DoNotOptimize(t.alpha_total());
    }
}

} // namespace

BENCHMARK(BM_laplacian)->Arg(32)->Arg(100)->Arg(256);
BENCHMARK(BM_network_step)->Args({32, 3})->Args({100, 3})->Args({64, 8});
BENCHMARK(BM_diagnostics_sample);
BENCHMARK(BM_alpha_ring)->Arg(16)->Arg(64);

BENCHMARK_MAIN();
