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

#ifndef _FRACTONLAB_TEMPERING_H
#define _FRACTONLAB_TEMPERING_H

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "fractonlab/mc_core.h"
#include "fractonlab/parallel.h"

namespace fractonlab {

enum class LadderScheme { kGeometric, kLinear };

std::string_view ladder_scheme_name(LadderScheme scheme);
LadderScheme parse_ladder_scheme(std::string_view text);

/// Strictly increasing inverse temperatures, at least two.
struct TemperatureLadder {
    std::vector<double> betas;

    size_t size() const {
        return betas.size();
    }
    bool operator==(const TemperatureLadder &other) const = default;
};

/// Validates and wraps an explicit list of betas.
TemperatureLadder make_ladder(std::vector<double> betas);

/// Grid between beta_min and beta_max with exact endpoints.
TemperatureLadder build_ladder(double beta_min, double beta_max, size_t count, LadderScheme scheme);

/// Replicas of one disorder realization spread over a ladder.
///
/// Replicas are indexed by identity; a swap exchanges slot assignments (and
/// with them the temperatures), never configurations.
struct PTState {
    TemperatureLadder ladder;
    std::vector<ReplicaState> replicas;
    std::vector<uint32_t> slot_of_replica;
    std::vector<uint32_t> replica_at_slot;
    /// Per adjacent slot pair (i, i+1).
    std::vector<uint64_t> swaps_proposed;
    std::vector<uint64_t> swaps_accepted;
    /// Bottom -> top -> bottom traversals per replica.
    std::vector<uint64_t> roundtrips;
    /// 0: bottom not yet visited, 1: at/after bottom, 2: reached top since bottom.
    std::vector<uint8_t> trip_phase;
    uint64_t swap_passes = 0;
    RandomStream swap_rng;

    bool operator==(const PTState &other) const = default;
};

/// Replica r uses stream (seed, realization, r, replica); swaps use their own stream.
PTState make_pt_state(
    const SpinModel &model,
    const TemperatureLadder &ladder,
    uint64_t seed,
    uint64_t realization,
    InitialSpins init = InitialSpins::kRandom);

struct PTOptions {
    /// Metropolis sweeps per replica between swap passes.
    uint32_t sweeps_between_swaps = 10;
    SweepSchedule schedule;
    bool swaps_enabled = true;
    Execution exec = Execution::kParallel;
};

/// Called after every scheduled sweep of a replica with its current slot.
/// Calls for different slots may run concurrently.
using SweepObserver = std::function<void(uint32_t slot, const ReplicaState &replica)>;

/// Advances every replica by `sweeps` scheduled sweeps. Replicas are
/// independent between swap barriers, so the parallel and serial paths agree bit for bit.
void advance_replicas(
    const SpinModel &model,
    PTState &state,
    uint32_t sweeps,
    const SweepSchedule &schedule,
    Execution exec,
    const SweepObserver *observer = nullptr);

/// min(1, exp[(beta_a - beta_b)(E_a - E_b)]).
double swap_probability(double beta_a, double beta_b, int64_t energy_a, int64_t energy_b);

/// One pass over adjacent pairs, even pairs on even passes and odd pairs on odd passes.
void swap_pass(const SpinModel &model, PTState &state);

/// advance_replicas followed by swap_pass (when enabled).
void pt_step(const SpinModel &model, PTState &state, const PTOptions &options, const SweepObserver *observer = nullptr);

struct MixingReport {
    /// Per adjacent pair; nullopt when no swap was proposed.
    std::vector<std::optional<double>> acceptance;
    std::vector<uint64_t> proposed;
    std::vector<uint64_t> roundtrips;
    uint64_t total_roundtrips = 0;
};

MixingReport mixing_report(const PTState &state);

/// Moves interior betas so that each interval carries an equal share of the
/// cumulative -ln(acceptance). Equal acceptances leave the ladder unchanged.
TemperatureLadder equalize_ladder(const TemperatureLadder &ladder, std::span<const double> acceptance);

struct TuneOptions {
    double target_acceptance = 0.3;
    double tolerance = 0.1;
    int max_iterations = 10;
    uint32_t pilot_sweeps = 2000;
    uint32_t sweeps_between_swaps = 10;
    SweepSchedule schedule;
    uint64_t seed = 0;
    Execution exec = Execution::kParallel;
};

struct TuneResult {
    TemperatureLadder ladder;
    /// False when no iterate reached the acceptance band; `ladder` is then the
    /// iterate with the smallest acceptance spread.
    bool converged = false;
    int iterations = 0;
    std::vector<double> initial_acceptance;
    std::vector<double> final_acceptance;
};

/// Pilot-run acceptance of each adjacent pair (second half of the pilot).
std::vector<double> pilot_acceptance(const SpinModel &model, const TemperatureLadder &ladder, const TuneOptions &options);

TuneResult tune_ladder(const SpinModel &model, const TemperatureLadder &initial, const TuneOptions &options);

}  // namespace fractonlab

#endif
