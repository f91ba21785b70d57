#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "loewner/classify.hpp"
#include "loewner/hypgeo.hpp"
#include "loewner/spectral.hpp"

using namespace loewner;

namespace {

IntegratorConfig config(double horizon) {
    IntegratorConfig cfg;
    cfg.horizon = horizon;
    return cfg;
}

std::vector<Complex> disk_points(std::size_t n) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> r(0.0, 0.95), a(-3.14159, 3.14159);
    std::vector<Complex> out;
    for (std::size_t k = 0; k < n; ++k) out.push_back(std::polar(r(rng), a(rng)));
    return out;
}

} // namespace

static void BM_HypDistDisk(benchmark::State& state) {
    const auto pts = disk_points(1024);
    std::size_t k = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(hyp_dist_disk(pts[k & 1023], pts[(k + 1) & 1023]));
        ++k;
    }
}
BENCHMARK(BM_HypDistDisk);

static void BM_CatalogFlow(benchmark::State& state) {
    const EvolutionFamily f = catalog_family(CatalogId::B4);
    double t = 1.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(f(0.5, t, Complex(0.3, 0.2)));
        t = t < 100.0 ? t + 0.37 : 1.0;
    }
}
BENCHMARK(BM_CatalogFlow);

// Adaptive integration of I2 from its Herglotz field, horizon in state.range(0).
static void BM_IntegrateTrajectory(benchmark::State& state) {
    const IntegratorConfig cfg = config(static_cast<double>(state.range(0)));
    const EvolutionFamily f = integrate_family(*catalog_family(CatalogId::I2).herglotz(), cfg);
    for (auto _ : state) benchmark::DoNotOptimize(sample_trajectory(f, 0.0, Complex(0.5, 0.1), cfg));
}
BENCHMARK(BM_IntegrateTrajectory)->Arg(10)->Arg(100)->Unit(benchmark::kMillisecond);

static void BM_ClassifyBoundary(benchmark::State& state) {
    const EvolutionFamily f = catalog_family(CatalogId::B5);
    const IntegratorConfig cfg = config(400.0);
    for (auto _ : state) benchmark::DoNotOptimize(classify(f, 0.0, Complex(0.2, -0.1), cfg));
}
BENCHMARK(BM_ClassifyBoundary)->Unit(benchmark::kMillisecond);

static void BM_ClassifyInner(benchmark::State& state) {
    const EvolutionFamily f = catalog_family(CatalogId::I4);
    const IntegratorConfig cfg = config(200.0);
    for (auto _ : state) benchmark::DoNotOptimize(classify(f, 0.0, Complex(0.5, 0.0), cfg));
}
BENCHMARK(BM_ClassifyInner)->Unit(benchmark::kMillisecond);

static void BM_SpectralI4(benchmark::State& state) {
    const EvolutionFamily f = catalog_family(CatalogId::I4);
    for (auto _ : state) benchmark::DoNotOptimize(spectral_function(f, 200.0, 0.1));
}
BENCHMARK(BM_SpectralI4)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
