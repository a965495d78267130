#include <benchmark/benchmark.h>

#include "mnulink/channel.hpp"
#include "mnulink/ini_analytic.hpp"
#include "mnulink/numerology.hpp"
#include "mnulink/receiver.hpp"
#include "mnulink/rng.hpp"
#include "mnulink/waveform.hpp"

namespace {

using namespace mnulink;

Scenario two_ue() {
    Scenario s = make_scenario({{8, 128, 60e3, {}}, {7, 64, std::nullopt, {}}});
    s.channel.taps = 1;
    s.sigma2 = 0.0;
    return s;
}

void bm_build_coefficients(benchmark::State& state) {
    Scenario s = two_ue();
    for (auto _ : state) {
        auto c = build_ini_coefficients(s, 1);
        benchmark::DoNotOptimize(c);
    }
}
BENCHMARK(bm_build_coefficients)->Unit(benchmark::kMillisecond);

void bm_ini_trial(benchmark::State& state) {
    Scenario s = two_ue();
    std::uint64_t t = 0;
    for (auto _ : state) {
        auto d = ini_trial_sample(s, 1, s.seed, t++);
        benchmark::DoNotOptimize(d);
    }
}
BENCHMARK(bm_ini_trial)->Unit(benchmark::kMicrosecond);

void bm_synthesize_symbol(benchmark::State& state) {
    Scenario s = two_ue();
    const auto& ue = s.ues.front();
    auto gen = substream(1, 2, 3, 4);
    cvec x(ue.N);
    for (auto& v : x) v = draw_cn(gen, 1.0);
    ModSymbols mod{x};
    for (auto _ : state) {
        auto spread = dft_spread(mod, ue.N);
        auto grid = map_subcarriers(spread, ue);
        auto sig = synthesize_symbol(grid, ue);
        benchmark::DoNotOptimize(sig);
    }
}
BENCHMARK(bm_synthesize_symbol)->Unit(benchmark::kMicrosecond);

void bm_expected_ini_power(benchmark::State& state) {
    Scenario s = two_ue();
    auto coeffs = build_ini_coefficients(s, 1);
    std::vector<ChannelRealization> ch(2, identity_channel());
    auto p = s.resolved_powers();
    for (auto _ : state) {
        auto prof = expected_ini_power(s, 1, ch, p, &coeffs);
        benchmark::DoNotOptimize(prof);
    }
}
BENCHMARK(bm_expected_ini_power)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
