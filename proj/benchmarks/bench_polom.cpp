#include "polom/correlations.hpp"
#include "polom/dispersion.hpp"
#include "polom/langevin.hpp"
#include "polom/lindblad.hpp"
#include "polom/matrix_exp.hpp"

#include <benchmark/benchmark.h>

using namespace polom;

static void BM_ExcitonPolaritonBasis(benchmark::State& state) {
    const auto p = default_params();
    double k = 0.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(exciton_polariton_basis(k, p));
        k = k > 1.4 ? 0.0 : k + 1e-3;
    }
}
BENCHMARK(BM_ExcitonPolaritonBasis);

static void BM_SteadyCovariance(benchmark::State& state) {
    const auto sys = build_system(1.0, 0.4, 1630.0, default_params());
    for (auto _ : state)
        benchmark::DoNotOptimize(steady_covariance(sys));
}
BENCHMARK(BM_SteadyCovariance);

static void BM_InstabilityThreshold(benchmark::State& state) {
    const auto modes = pair_modes(1.0, 0.4, default_params());
    for (auto _ : state)
        benchmark::DoNotOptimize(instability_threshold(modes));
}
BENCHMARK(BM_InstabilityThreshold)->Unit(benchmark::kMillisecond);

static void BM_MatrixExpDrift(benchmark::State& state) {
    const auto sys = build_system(1.0, 0.4, 1630.0, default_params());
    const Eigen::MatrixXcd m = sys.drift * double(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(matrix_exp(m));
}
BENCHMARK(BM_MatrixExpDrift)->Arg(1)->Arg(100)->Arg(3000);

static void BM_G2Trace(benchmark::State& state) {
    const auto p = default_params();
    const auto cov = steady_covariance(build_system(1.0, 0.4, 1630.0, p));
    std::vector<double> tau;
    for (int i = 0; i < 1500; ++i)
        tau.push_back(2.0 * i);
    for (auto _ : state)
        benchmark::DoNotOptimize(g2_cross_trace(cov, cov.system.modes.phi, tau, p.n_bg_vis, p.n_bg_ir, IrFilter::both));
}
BENCHMARK(BM_G2Trace)->Unit(benchmark::kMillisecond);

// Short pulse window at fixed Fock cutoffs; cost per unit time scales with the stored elements.
static void BM_MasterEquationWindow(benchmark::State& state) {
    const auto modes = pair_modes(1.0, 0.4, default_params());
    FockConfig fc;
    fc.cutoff_s = fc.cutoff_vu = fc.cutoff_vl = int(state.range(0));
    fc.t_end = 50.0;
    std::size_t elements = 0;
    for (auto _ : state) {
        const auto tr = evolve(modes, 1e6, fc, DriveEnvelope::pulsed);
        elements = tr.stored_elements;
        benchmark::DoNotOptimize(tr.photons_per_pulse_vis);
    }
    state.counters["elements"] = double(elements);
}
BENCHMARK(BM_MasterEquationWindow)->Arg(4)->Arg(6)->Arg(8)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
