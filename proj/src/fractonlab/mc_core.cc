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

#include "fractonlab/mc_core.h"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace fractonlab {

AdjacencyIndex AdjacencyIndex::build(const CouplingHypergraph &h) {
    AdjacencyIndex a;
    std::vector<uint32_t> degree(h.spin_count, 0);
    a.coupling_offsets.push_back(0);
    for (const auto &c : h.couplings) {
        for (uint32_t s : c) {
            degree[s]++;
            a.coupling_spins.push_back(s);
        }
        a.coupling_offsets.push_back((uint32_t)a.coupling_spins.size());
    }
    a.spin_offsets.assign(h.spin_count + 1, 0);
    for (uint32_t s = 0; s < h.spin_count; s++) {
        a.spin_offsets[s + 1] = a.spin_offsets[s] + degree[s];
        a.max_degree = std::max(a.max_degree, degree[s]);
    }
    a.spin_couplings.resize(a.spin_offsets.back());
    std::vector<uint32_t> fill(a.spin_offsets.begin(), a.spin_offsets.end() - 1);
    for (uint32_t c = 0; c < h.couplings.size(); c++) {
        for (uint32_t s : h.couplings[c]) {
            a.spin_couplings[fill[s]++] = c;
        }
    }
    return a;
}

SpinModel::SpinModel(CouplingHypergraph hypergraph, DisorderRealization disorder)
    : hypergraph_(std::move(hypergraph)), disorder_(std::move(disorder)), adjacency_(AdjacencyIndex::build(hypergraph_)) {
    if (disorder_.eta.size() != hypergraph_.couplings.size()) {
        throw std::invalid_argument("Disorder length does not match the hypergraph's coupling count.");
    }
}

int64_t SpinModel::energy(std::span<const int8_t> spins) const {
    return fractonlab::energy(hypergraph_, disorder_, spins);
}

namespace {

void rebuild_terms(const SpinModel &model, ReplicaState &state) {
    const auto &adj = model.adjacency();
    const auto &eta = model.disorder().eta;
    state.terms.resize(model.coupling_count());
    int64_t e = 0;
    for (uint32_t c = 0; c < model.coupling_count(); c++) {
        int t = eta[c];
        for (uint32_t s : adj.spins_of(c)) {
            t *= state.spins[s];
        }
        state.terms[c] = (int8_t)t;
        e -= t;
    }
    state.energy = e;
}

// Identity reset before shuffling keeps the order a pure function of the RNG.
void shuffled_order(uint32_t n, RandomStream &rng, std::vector<uint32_t> &order) {
    order.resize(n);
    std::iota(order.begin(), order.end(), 0u);
    for (uint32_t i = n; i > 1; i--) {
        std::swap(order[i - 1], order[rng.below(i)]);
    }
}

thread_local std::vector<uint32_t> tls_order;

}  // namespace

void set_beta(const SpinModel &model, ReplicaState &state, double beta) {
    state.beta = beta;
    uint32_t max_de = 2 * model.adjacency().max_degree;
    state.acceptance.resize(max_de + 1);
    for (uint32_t de = 0; de <= max_de; de++) {
        state.acceptance[de] = std::exp(-beta * (double)de);
    }
}

ReplicaState make_replica(const SpinModel &model, double beta, RandomStream rng, InitialSpins init) {
    ReplicaState state;
    state.rng = rng;
    state.spins.assign(model.spin_count(), +1);
    if (init == InitialSpins::kRandom) {
        for (auto &s : state.spins) {
            s = (state.rng.next_u32() & 1) ? +1 : -1;
        }
    }
    rebuild_terms(model, state);
    set_beta(model, state, beta);
    return state;
}

ReplicaState restore_replica(
    const SpinModel &model, std::vector<int8_t> spins, double beta, RandomStream rng, uint64_t sweep_count) {
    if (spins.size() != model.spin_count()) {
        throw std::invalid_argument("Restored spin configuration has the wrong length.");
    }
    ReplicaState state;
    state.spins = std::move(spins);
    state.rng = rng;
    state.sweep_count = sweep_count;
    rebuild_terms(model, state);
    set_beta(model, state, beta);
    return state;
}

int64_t local_delta_e(const SpinModel &model, const ReplicaState &state, uint32_t spin) {
    int64_t sum = 0;
    for (uint32_t c : model.adjacency().couplings_of(spin)) {
        sum += state.terms[c];
    }
    return 2 * sum;
}

void flip_spin(const SpinModel &model, ReplicaState &state, uint32_t spin) {
    int64_t de = local_delta_e(model, state, spin);
    state.spins[spin] = (int8_t)-state.spins[spin];
    for (uint32_t c : model.adjacency().couplings_of(spin)) {
        state.terms[c] = (int8_t)-state.terms[c];
    }
    state.energy += de;
}

uint64_t metropolis_sweep(const SpinModel &model, ReplicaState &state, AcceptanceRule rule) {
    auto &order = tls_order;
    shuffled_order(model.spin_count(), state.rng, order);
    uint64_t accepted = 0;
    for (uint32_t spin : order) {
        int64_t de = local_delta_e(model, state, spin);
        bool accept;
        if (de <= 0) {
            accept = true;
        } else if (rule == AcceptanceRule::kMetropolis) {
            accept = state.rng.uniform() < state.acceptance[de];
        } else {
            accept = state.rng.uniform() < state.acceptance[de / 2];
        }
        if (accept) {
            flip_spin(model, state, spin);
            accepted++;
        }
    }
    state.sweep_count++;
    return accepted;
}

uint64_t microcanonical_sweep(const SpinModel &model, ReplicaState &state) {
    auto &order = tls_order;
    shuffled_order(model.spin_count(), state.rng, order);
    uint64_t flips = 0;
    for (uint32_t spin : order) {
        if (local_delta_e(model, state, spin) == 0) {
            flip_spin(model, state, spin);
            flips++;
        }
    }
    return flips;
}

uint64_t scheduled_sweep(const SpinModel &model, ReplicaState &state, const SweepSchedule &schedule) {
    uint64_t accepted = metropolis_sweep(model, state, schedule.rule);
    for (uint32_t k = 0; k < schedule.microcanonical_per_metropolis; k++) {
        microcanonical_sweep(model, state);
    }
    return accepted;
}

bool energy_cache_coherent(const SpinModel &model, const ReplicaState &state) {
    ReplicaState copy;
    copy.spins = state.spins;
    rebuild_terms(model, copy);
    return copy.energy == state.energy && copy.terms == state.terms && model.energy(state.spins) == state.energy;
}

}  // namespace fractonlab
