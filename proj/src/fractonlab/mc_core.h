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

#ifndef _FRACTONLAB_MC_CORE_H
#define _FRACTONLAB_MC_CORE_H

#include <cstdint>
#include <span>
#include <vector>

#include "fractonlab/rng.h"
#include "fractonlab/sm_map.h"

namespace fractonlab {

/// CSR neighborhood tables: spin -> incident couplings, coupling -> spins.
struct AdjacencyIndex {
    std::vector<uint32_t> spin_offsets;
    std::vector<uint32_t> spin_couplings;
    std::vector<uint32_t> coupling_offsets;
    std::vector<uint32_t> coupling_spins;
    uint32_t max_degree = 0;

    static AdjacencyIndex build(const CouplingHypergraph &h);

    std::span<const uint32_t> couplings_of(uint32_t spin) const {
        return {spin_couplings.data() + spin_offsets[spin], spin_offsets[spin + 1] - spin_offsets[spin]};
    }
    std::span<const uint32_t> spins_of(uint32_t coupling) const {
        return {
            coupling_spins.data() + coupling_offsets[coupling],
            coupling_offsets[coupling + 1] - coupling_offsets[coupling]};
    }
};

/// A hypergraph with one fixed disorder realization, ready for sampling.
/// Immutable; shared read-only by all replicas.
class SpinModel {
   public:
    SpinModel(CouplingHypergraph hypergraph, DisorderRealization disorder);

    const CouplingHypergraph &hypergraph() const {
        return hypergraph_;
    }
    const DisorderRealization &disorder() const {
        return disorder_;
    }
    const AdjacencyIndex &adjacency() const {
        return adjacency_;
    }
    uint32_t spin_count() const {
        return hypergraph_.spin_count;
    }
    size_t coupling_count() const {
        return hypergraph_.couplings.size();
    }
    int64_t energy(std::span<const int8_t> spins) const;

   private:
    CouplingHypergraph hypergraph_;
    DisorderRealization disorder_;
    AdjacencyIndex adjacency_;
};

/// One Markov chain. `terms[c]` caches eta_c prod_{i in c} sigma_i so that
/// energy == -sum(terms) holds after every update.
struct ReplicaState {
    std::vector<int8_t> spins;
    std::vector<int8_t> terms;
    int64_t energy = 0;
    double beta = 0;
    RandomStream rng;
    uint64_t sweep_count = 0;
    /// acceptance[dE] = exp(-beta dE) for dE in [0, 2 max_degree]. Derived from beta.
    std::vector<double> acceptance;

    bool operator==(const ReplicaState &other) const = default;
};

enum class InitialSpins { kRandom, kAllUp };

ReplicaState make_replica(const SpinModel &model, double beta, RandomStream rng, InitialSpins init);
/// Rebuilds the replica's caches from `spins` (used when restoring a checkpoint).
ReplicaState restore_replica(
    const SpinModel &model, std::vector<int8_t> spins, double beta, RandomStream rng, uint64_t sweep_count);

void set_beta(const SpinModel &model, ReplicaState &state, double beta);

/// Energy change of flipping `spin`: 2 sum_{c containing spin} eta_c prod sigma.
int64_t local_delta_e(const SpinModel &model, const ReplicaState &state, uint32_t spin);

void flip_spin(const SpinModel &model, ReplicaState &state, uint32_t spin);

/// Test hook for negative controls; anything but kMetropolis breaks detailed balance.
enum class AcceptanceRule { kMetropolis, kCorruptedForTesting };

/// N_s single-spin Metropolis proposals in a freshly shuffled order.
/// Returns the number of accepted flips.
uint64_t metropolis_sweep(
    const SpinModel &model, ReplicaState &state, AcceptanceRule rule = AcceptanceRule::kMetropolis);

/// Visits every spin in a freshly shuffled order and flips it iff dE == 0.
/// Returns the number of flips.
uint64_t microcanonical_sweep(const SpinModel &model, ReplicaState &state);

/// Sweep mix used between measurements: one Metropolis sweep followed by
/// `microcanonical_per_metropolis` zero-cost sweeps.
struct SweepSchedule {
    uint32_t microcanonical_per_metropolis = 1;
    AcceptanceRule rule = AcceptanceRule::kMetropolis;
};

/// One Metropolis sweep plus the schedule's microcanonical sweeps.
uint64_t scheduled_sweep(const SpinModel &model, ReplicaState &state, const SweepSchedule &schedule);

/// Full recount check of the cached energy and terms.
bool energy_cache_coherent(const SpinModel &model, const ReplicaState &state);

}  // namespace fractonlab

#endif
