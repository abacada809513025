#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "lwcov/geo.hpp"
#include "lwcov/ingest.hpp"
#include "lwcov/model.hpp"
#include "lwcov/synth.hpp"

namespace {

void BM_HorizontalDistance(benchmark::State& state) {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> lat(35.5, 36.0), lon(-79.0, -78.5);
    std::vector<lwcov::GeoPoint> pts;
    for (int i = 0; i < 1024; ++i) pts.emplace_back(lat(rng), lon(rng), 0.0);
    std::size_t i = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(lwcov::horizontal_distance(pts[i & 1023], pts[(i + 1) & 1023]));
        ++i;
    }
}
BENCHMARK(BM_HorizontalDistance);

void BM_FitPathLoss(benchmark::State& state) {
    const auto campaign = lwcov::simulate(lwcov::presets::shadowing_recovery(1));
    const auto joined = lwcov::join_samples(campaign.transmissions, campaign.receptions, campaign.gateways);
    for (auto _ : state) benchmark::DoNotOptimize(lwcov::fit_path_loss(joined.samples));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(joined.samples.size()));
}
BENCHMARK(BM_FitPathLoss);

void BM_JoinSamples(benchmark::State& state) {
    const auto campaign = lwcov::simulate(lwcov::presets::helikite_hover(1));
    for (auto _ : state) {
        benchmark::DoNotOptimize(lwcov::join_samples(campaign.transmissions, campaign.receptions, campaign.gateways));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(campaign.receptions.size()));
}
BENCHMARK(BM_JoinSamples);

void BM_Simulate(benchmark::State& state) {
    const auto scenario = lwcov::presets::shadowing_recovery(1);
    for (auto _ : state) benchmark::DoNotOptimize(lwcov::simulate(scenario));
}
BENCHMARK(BM_Simulate);

}  // namespace

BENCHMARK_MAIN();
