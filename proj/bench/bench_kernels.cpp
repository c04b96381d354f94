#include <benchmark/benchmark.h>

#include "locsim/campaign.hpp"
#include "locsim/config.hpp"
#include "locsim/core_model.hpp"

namespace {

using namespace locsim;

SystemConfig sixteen_clients() {
    SystemConfig c;
    c.tau = 40;
    for (int i = 0; i < 16; ++i) c.clients.push_back({i + 1, 0.95 - 0.05 * i, 0.1});
    return c;
}

void BM_FeasibilityParallel(benchmark::State& state) {
    const auto c = sixteen_clients();
    const auto xbar = compute_targets(c).xbar_star;
    for (auto _ : state) benchmark::DoNotOptimize(validate_feasibility(c, xbar, SubsetDepth::exhaustive));
}

void BM_FeasibilitySerial(benchmark::State& state) {
    const auto c = sixteen_clients();
    const auto xbar = compute_targets(c).xbar_star;
    for (auto _ : state) benchmark::DoNotOptimize(serial::validate_feasibility(c, xbar, SubsetDepth::exhaustive));
}

CampaignSpec bench_campaign() {
    CampaignSpec spec;
    spec.config = preset("high");
    spec.config.horizon = 2000;
    spec.policies = {PolicyId::mdvf, PolicyId::ldf, PolicyId::mw_aoi};
    spec.seeds = {1, 2, 3, 4};
    return spec;
}

void BM_CampaignParallel(benchmark::State& state) {
    const auto spec = bench_campaign();
    const auto targets = compute_targets(spec.config);
    for (auto _ : state) benchmark::DoNotOptimize(execute_runs(spec, targets));
}

void BM_CampaignSerial(benchmark::State& state) {
    const auto spec = bench_campaign();
    const auto targets = compute_targets(spec.config);
    for (auto _ : state) benchmark::DoNotOptimize(serial::execute_runs(spec, targets));
}

BENCHMARK(BM_FeasibilityParallel)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_FeasibilitySerial)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_CampaignParallel)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_CampaignSerial)->Unit(benchmark::kMillisecond)->UseRealTime();

} // namespace

BENCHMARK_MAIN();
