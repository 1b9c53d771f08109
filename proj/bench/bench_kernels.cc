// Copyright 2026 The Fractonlab Authors
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


// Serial reference vs OpenMP kernels. Arg 0 is the serial path, 1 the parallel one.

#include <benchmark/benchmark.h>

#include "fractonlab/code_model.h"
#include "fractonlab/ensemble.h"
#include "fractonlab/exact_oracle.h"
#include "fractonlab/sm_map.h"
#include "fractonlab/tempering.h"

using namespace fractonlab;

namespace {

Execution exec_of(const benchmark::State &state) {
    return state.range(0) ? Execution::kParallel : Execution::kSerial;
}

void BM_AdvanceReplicas(benchmark::State &state) {
    auto h = map_error_model(build_checkerboard(8), PauliType::kX);
    SpinModel model(h, sample_disorder(h, 0.05, 1));
    auto ladder = build_ladder(0.3, 1.5, 16, LadderScheme::kGeometric);
    auto pt = make_pt_state(model, ladder, 1, 0);
    for (auto _ : state) {
        advance_replicas(model, pt, 10, SweepSchedule{}, exec_of(state));
    }
    state.SetItemsProcessed(state.iterations() * 10 * ladder.size() * h.spin_count);
}
BENCHMARK(BM_AdvanceReplicas)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_DensityOfStates(benchmark::State &state) {
    auto h = random_hypergraph(22, 44, 4, 1);
    auto d = sample_disorder(h, 0.2, 1);
    for (auto _ : state) {
        benchmark::DoNotOptimize(density_of_states(h, d, exec_of(state)));
    }
    state.SetItemsProcessed(state.iterations() * (int64_t{1} << h.spin_count));
}
BENCHMARK(BM_DensityOfStates)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_RunEnsemble(benchmark::State &state) {
    EnsembleConfig c;
    c.code = CodeKind::kCheckerboard;
    c.lattice_size = 4;
    c.p = 0.05;
    c.realizations = 8;
    c.temperatures = 4;
    c.tau = 10;
    c.beta_min = 0.3;
    c.beta_max = 1.5;
    c.seed = 1;
    for (auto _ : state) {
        auto progress = start_ensemble(c, exec_of(state));
        RunControl control;
        control.exec = exec_of(state);
        benchmark::DoNotOptimize(run_ensemble(c, progress, control));
    }
}
BENCHMARK(BM_RunEnsemble)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
