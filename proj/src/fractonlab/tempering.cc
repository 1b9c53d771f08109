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

#include "fractonlab/tempering.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace fractonlab {

std::string_view ladder_scheme_name(LadderScheme scheme) {
    return scheme == LadderScheme::kGeometric ? "geometric" : "linear";
}

LadderScheme parse_ladder_scheme(std::string_view text) {
    if (text == "geometric") {
        return LadderScheme::kGeometric;
    }
    if (text == "linear") {
        return LadderScheme::kLinear;
    }
    throw std::invalid_argument("Unknown ladder scheme '" + std::string(text) + "' (expected geometric or linear).");
}

TemperatureLadder make_ladder(std::vector<double> betas) {
    if (betas.size() < 2) {
        throw std::invalid_argument("A temperature ladder needs at least 2 temperatures.");
    }
    for (size_t i = 0; i < betas.size(); i++) {
        if (!std::isfinite(betas[i]) || betas[i] < 0) {
            throw std::invalid_argument("Ladder betas must be finite and non-negative.");
        }
        if (i > 0 && !(betas[i] > betas[i - 1])) {
            throw std::invalid_argument("Ladder betas must be strictly increasing.");
        }
    }
    return TemperatureLadder{std::move(betas)};
}

TemperatureLadder build_ladder(double beta_min, double beta_max, size_t count, LadderScheme scheme) {
    if (!(beta_min > 0) || !(beta_max > beta_min)) {
        throw std::invalid_argument("Ladder bounds must satisfy 0 < beta_min < beta_max.");
    }
    if (count < 2) {
        throw std::invalid_argument("A temperature ladder needs at least 2 temperatures.");
    }
    std::vector<double> betas(count);
    double n = (double)(count - 1);
    for (size_t i = 0; i < count; i++) {
        double f = (double)i / n;
        if (scheme == LadderScheme::kLinear) {
            betas[i] = beta_min + (beta_max - beta_min) * f;
        } else {
            betas[i] = beta_min * std::pow(beta_max / beta_min, f);
        }
    }
    betas.front() = beta_min;
    betas.back() = beta_max;
    return make_ladder(std::move(betas));
}

PTState make_pt_state(
    const SpinModel &model, const TemperatureLadder &ladder, uint64_t seed, uint64_t realization, InitialSpins init) {
    PTState state;
    state.ladder = make_ladder(ladder.betas);
    size_t n = ladder.size();
    for (size_t r = 0; r < n; r++) {
        auto rng = RandomStream::for_purpose(seed, realization, r, StreamPurpose::kReplica);
        state.replicas.push_back(make_replica(model, ladder.betas[r], rng, init));
        state.slot_of_replica.push_back((uint32_t)r);
        state.replica_at_slot.push_back((uint32_t)r);
    }
    state.swaps_proposed.assign(n - 1, 0);
    state.swaps_accepted.assign(n - 1, 0);
    state.roundtrips.assign(n, 0);
    state.trip_phase.assign(n, 0);
    state.trip_phase[0] = 1;
    state.swap_rng = RandomStream::for_purpose(seed, realization, 0, StreamPurpose::kSwap);
    return state;
}

void advance_replicas(
    const SpinModel &model,
    PTState &state,
    uint32_t sweeps,
    const SweepSchedule &schedule,
    Execution exec,
    const SweepObserver *observer) {
    auto run = [&](int64_t r) {
        ReplicaState &rep = state.replicas[r];
        uint32_t slot = state.slot_of_replica[r];
        for (uint32_t k = 0; k < sweeps; k++) {
            scheduled_sweep(model, rep, schedule);
            if (observer) {
                (*observer)(slot, rep);
            }
        }
    };
    auto n = (int64_t)state.replicas.size();
    if (exec == Execution::kParallel) {
#pragma omp parallel for schedule(dynamic, 1)
        for (int64_t r = 0; r < n; r++) {
            run(r);
        }
    } else {
        for (int64_t r = 0; r < n; r++) {
            run(r);
        }
    }
}

double swap_probability(double beta_a, double beta_b, int64_t energy_a, int64_t energy_b) {
    double x = (beta_a - beta_b) * (double)(energy_a - energy_b);
    return x >= 0 ? 1.0 : std::exp(x);
}

void swap_pass(const SpinModel &model, PTState &state) {
    size_t n = state.ladder.size();
    size_t start = state.swap_passes % 2;
    for (size_t i = start; i + 1 < n; i += 2) {
        uint32_t a = state.replica_at_slot[i];
        uint32_t b = state.replica_at_slot[i + 1];
        double prob = swap_probability(
            state.ladder.betas[i], state.ladder.betas[i + 1], state.replicas[a].energy, state.replicas[b].energy);
        double u = state.swap_rng.uniform();
        state.swaps_proposed[i]++;
        if (u < prob) {
            state.swaps_accepted[i]++;
            std::swap(state.replica_at_slot[i], state.replica_at_slot[i + 1]);
            state.slot_of_replica[a] = (uint32_t)(i + 1);
            state.slot_of_replica[b] = (uint32_t)i;
            set_beta(model, state.replicas[a], state.ladder.betas[i + 1]);
            set_beta(model, state.replicas[b], state.ladder.betas[i]);
        }
    }
    state.swap_passes++;

    uint32_t bottom = state.replica_at_slot.front();
    uint32_t top = state.replica_at_slot.back();
    if (state.trip_phase[top] == 1) {
        state.trip_phase[top] = 2;
    }
    if (state.trip_phase[bottom] == 2) {
        state.roundtrips[bottom]++;
    }
    state.trip_phase[bottom] = 1;
}

void pt_step(const SpinModel &model, PTState &state, const PTOptions &options, const SweepObserver *observer) {
    advance_replicas(model, state, options.sweeps_between_swaps, options.schedule, options.exec, observer);
    if (options.swaps_enabled) {
        swap_pass(model, state);
    }
}

MixingReport mixing_report(const PTState &state) {
    MixingReport report;
    report.proposed = state.swaps_proposed;
    for (size_t i = 0; i < state.swaps_proposed.size(); i++) {
        if (state.swaps_proposed[i] == 0) {
            report.acceptance.push_back(std::nullopt);
        } else {
            report.acceptance.push_back((double)state.swaps_accepted[i] / (double)state.swaps_proposed[i]);
        }
    }
    report.roundtrips = state.roundtrips;
    for (uint64_t r : state.roundtrips) {
        report.total_roundtrips += r;
    }
    return report;
}

TemperatureLadder equalize_ladder(const TemperatureLadder &ladder, std::span<const double> acceptance) {
    size_t n = ladder.size();
    if (acceptance.size() + 1 != n) {
        throw std::invalid_argument("Need one acceptance rate per adjacent pair.");
    }
    std::vector<double> cumulative(n, 0);
    for (size_t j = 0; j + 1 < n; j++) {
        double a = std::clamp(acceptance[j], 1e-4, 0.9999);
        cumulative[j + 1] = cumulative[j] - std::log(a);
    }
    double total = cumulative.back();
    std::vector<double> betas(n);
    betas.front() = ladder.betas.front();
    betas.back() = ladder.betas.back();
    size_t j = 0;
    for (size_t i = 1; i + 1 < n; i++) {
        double target = total * (double)i / (double)(n - 1);
        while (j + 2 < n && cumulative[j + 1] < target) {
            j++;
        }
        double f = (target - cumulative[j]) / (cumulative[j + 1] - cumulative[j]);
        betas[i] = ladder.betas[j] + f * (ladder.betas[j + 1] - ladder.betas[j]);
    }
    return make_ladder(std::move(betas));
}

std::vector<double> pilot_acceptance(const SpinModel &model, const TemperatureLadder &ladder, const TuneOptions &options) {
    PTState state = make_pt_state(model, ladder, options.seed, 0);
    for (auto &rep : state.replicas) {
        rep.rng = RandomStream(mix_key({options.seed, rep.rng.state().stream}), (uint64_t)StreamPurpose::kPilot);
    }
    PTOptions pt;
    pt.sweeps_between_swaps = std::max<uint32_t>(1, options.sweeps_between_swaps);
    pt.schedule = options.schedule;
    pt.exec = options.exec;
    uint32_t steps = std::max<uint32_t>(4, options.pilot_sweeps / pt.sweeps_between_swaps);
    for (uint32_t s = 0; s < steps / 2; s++) {
        pt_step(model, state, pt);
    }
    std::fill(state.swaps_proposed.begin(), state.swaps_proposed.end(), 0);
    std::fill(state.swaps_accepted.begin(), state.swaps_accepted.end(), 0);
    for (uint32_t s = steps / 2; s < steps; s++) {
        pt_step(model, state, pt);
    }
    std::vector<double> acc;
    for (const auto &a : mixing_report(state).acceptance) {
        acc.push_back(a.value_or(0.0));
    }
    return acc;
}

TuneResult tune_ladder(const SpinModel &model, const TemperatureLadder &initial, const TuneOptions &options) {
    auto spread = [](const std::vector<double> &acc) {
        auto [lo, hi] = std::minmax_element(acc.begin(), acc.end());
        return *hi - *lo;
    };
    auto in_band = [&](const std::vector<double> &acc) {
        return std::all_of(acc.begin(), acc.end(), [&](double a) {
            return std::abs(a - options.target_acceptance) <= options.tolerance;
        });
    };

    TuneResult result;
    TemperatureLadder ladder = make_ladder(initial.betas);
    double best_spread = std::numeric_limits<double>::infinity();
    for (int it = 0; it < std::max(1, options.max_iterations); it++) {
        auto acc = pilot_acceptance(model, ladder, options);
        if (it == 0) {
            result.initial_acceptance = acc;
        }
        result.iterations = it + 1;
        if (spread(acc) < best_spread) {
            best_spread = spread(acc);
            result.ladder = ladder;
            result.final_acceptance = acc;
        }
        if (in_band(acc)) {
            result.ladder = ladder;
            result.final_acceptance = acc;
            result.converged = true;
            return result;
        }
        ladder = equalize_ladder(ladder, acc);
    }
    return result;
}

}  // namespace fractonlab
