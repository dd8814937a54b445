// Integrator throughput for the register sizes the sweeps actually use.

#include <benchmark/benchmark.h>

#include "qbat/dynamics.hpp"
#include "qbat/model.hpp"

using namespace qbat;

static void BM_LindbladRhs(benchmark::State& state) {
    const int m = static_cast<int>(state.range(0));
    const ModelSpec spec = ModelSpec::from_coupling_ratio(1, m, 20.0);
    const Matrix v = build_interaction(spec);
    const Matrix a = pseudomode_lowering(spec);
    const Matrix rho = build_initial_state(spec, ProductChargers{{0.8}});
    for (auto _ : state) {
        benchmark::DoNotOptimize(lindblad_rhs(rho, v, spec.lambda, a));
    }
}
BENCHMARK(BM_LindbladRhs)->Arg(1)->Arg(2)->Arg(3)->Unit(benchmark::kMicrosecond);

// Whole steps of the production integrator, including the structured
// application of the coupling and dissipator.
static void BM_EvolveSteps(benchmark::State& state) {
    const int m = static_cast<int>(state.range(0));
    const ModelSpec spec = ModelSpec::from_coupling_ratio(1, m, 20.0);
    IntegratorConfig cfg;
    cfg.dt = 1e-4;
    cfg.t_max = 100 * cfg.dt;
    cfg.record_stride = 1000000; // initial record only
    for (auto _ : state) {
        benchmark::DoNotOptimize(evolve(spec, ProductChargers{{0.8}}, cfg));
    }
    state.SetItemsProcessed(state.iterations() * 100);
}
BENCHMARK(BM_EvolveSteps)->Arg(1)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);
