// Microbenchmarks of the dense kernels feeding every trajectory record.

#include <benchmark/benchmark.h>

#include "qbat/ergotropy.hpp"
#include "qbat/linalg.hpp"
#include "qbat/model.hpp"

#include <random>

using namespace qbat;

namespace {

Matrix seeded_density(Eigen::Index dim) {
    std::mt19937 rng(12345);
    std::normal_distribution<double> dist(0.0, 1.0);
    Matrix a(dim, dim);
    for (Eigen::Index j = 0; j < dim; ++j) {
        for (Eigen::Index i = 0; i < dim; ++i) a(i, j) = Complex(dist(rng), dist(rng));
    }
    Matrix rho = a * a.adjoint();
    rho /= rho.trace().real();
    return rho;
}

} // namespace

static void BM_PartialTrace(benchmark::State& state) {
    const int m = static_cast<int>(state.range(0));
    const ModelSpec spec = ModelSpec::from_coupling_ratio(1, m, 20.0);
    const Matrix rho = seeded_density(spec.extended_dim());
    const HilbertLayout layout = extended_layout(spec);
    const std::vector<std::size_t> keep = battery_indices(spec);
    for (auto _ : state) {
        benchmark::DoNotOptimize(partial_trace(rho, layout, keep));
    }
}
BENCHMARK(BM_PartialTrace)->Arg(1)->Arg(2)->Arg(3)->Unit(benchmark::kMicrosecond);

static void BM_EigHermitian(benchmark::State& state) {
    const Eigen::Index dim = state.range(0);
    const Matrix rho = seeded_density(dim);
    for (auto _ : state) {
        benchmark::DoNotOptimize(eig_hermitian(rho));
    }
}
BENCHMARK(BM_EigHermitian)->Arg(4)->Arg(8)->Arg(16)->Unit(benchmark::kMicrosecond);

static void BM_ErgotropyBreakdown(benchmark::State& state) {
    const int m = static_cast<int>(state.range(0));
    const ModelSpec spec = ModelSpec::from_coupling_ratio(1, m, 20.0);
    const ErgotropyEvaluator eval(battery_hamiltonian(spec));
    const Matrix rho = seeded_density(eval.dim());
    for (auto _ : state) {
        benchmark::DoNotOptimize(eval.breakdown(rho));
    }
}
BENCHMARK(BM_ErgotropyBreakdown)->Arg(1)->Arg(2)->Arg(3)->Unit(benchmark::kMicrosecond);
