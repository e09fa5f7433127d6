// Copyright 2026 The photonchain Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include "photonchain/engine.h"
#include "photonchain/oracle.h"

namespace pc = photonchain;

namespace {

void BM_RunShotGhz(benchmark::State &state) {
    const int n = static_cast<int>(state.range(0));
    const pc::PulseSchedule s = pc::build_schedule(pc::ProtocolConfig::ghz(n));
    const pc::NoiseConfig noise = pc::NoiseConfig::calibrated();
    const std::vector<pc::MeasBasis> bases(static_cast<size_t>(n), pc::MeasBasis::equator(0.3));
    uint64_t i = 0;
    for (auto _ : state) {
        pc::Rng rng = pc::Rng::stream(1, i++);
        benchmark::DoNotOptimize(pc::run_shot(s, noise, bases, rng));
    }
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_RunShotGhz)->Arg(2)->Arg(6)->Arg(14);

void BM_RunShotCluster(benchmark::State &state) {
    const int n = static_cast<int>(state.range(0));
    const pc::PulseSchedule s = pc::build_schedule(pc::ProtocolConfig::cluster(n));
    const pc::NoiseConfig noise = pc::NoiseConfig::calibrated();
    const auto bases = pc::alternating_setting(n, true);
    uint64_t i = 0;
    for (auto _ : state) {
        pc::Rng rng = pc::Rng::stream(1, i++);
        benchmark::DoNotOptimize(pc::run_shot(s, noise, bases, rng));
    }
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_RunShotCluster)->Arg(4)->Arg(10);

void BM_EmitCycling(benchmark::State &state) {
    pc::AtomKet a;
    a[pc::level::k2p2] = 0.6;
    a[pc::level::k2m2] = 0.8;
    for (auto _ : state) {
        benchmark::DoNotOptimize(pc::emit_cycling(a));
    }
}
BENCHMARK(BM_EmitCycling);

void BM_RamanRotation(benchmark::State &state) {
    pc::AtomKet a = pc::AtomKet::basis(pc::level::k1p1);
    for (auto _ : state) {
        a = pc::raman_rotation(a, pc::level::k1p1, pc::level::k20, 0.3, 0.1);
        benchmark::DoNotOptimize(a);
    }
}
BENCHMARK(BM_RamanRotation);

void BM_DenseRunCluster(benchmark::State &state) {
    const pc::ProtocolConfig cfg = pc::ProtocolConfig::cluster(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(pc::dense_run(cfg));
    }
}
BENCHMARK(BM_DenseRunCluster)->Arg(6)->Arg(10);

void BM_ParityExpectation(benchmark::State &state) {
    const int n = static_cast<int>(state.range(0));
    const pc::ProtocolConfig cfg = pc::ProtocolConfig::ghz(n);
    const std::vector<pc::MeasBasis> bases(static_cast<size_t>(n), pc::MeasBasis::equator(0.4));
    for (auto _ : state) {
        benchmark::DoNotOptimize(pc::parity_expectation(cfg, bases));
    }
}
BENCHMARK(BM_ParityExpectation)->Arg(14);

void BM_RateBenchmarkHour(benchmark::State &state) {
    const pc::NoiseConfig noise = pc::NoiseConfig::calibrated();
    for (auto _ : state) {
        benchmark::DoNotOptimize(pc::rate_benchmark(pc::ProtocolConfig::rate_benchmark(14), noise, 3600.0, 1));
    }
}
BENCHMARK(BM_RateBenchmarkHour)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
