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

#include <algorithm>
#include <cmath>

#include "gtest/gtest.h"
#include "fractonlab/exact_oracle.h"

using namespace fractonlab;

namespace {

SpinModel haah_model(int L, double p, uint64_t seed) {
    auto h = map_error_model(build_haah(L), PauliType::kX);
    auto d = sample_disorder(h, p, seed);
    return SpinModel(h, d);
}

}  // namespace

TEST(mc_core, adjacency_matches_couplings) {
    auto model = haah_model(3, 0.1, 1);
    const auto &adj = model.adjacency();
    const auto &h = model.hypergraph();
    std::vector<uint32_t> degree(h.spin_count, 0);
    for (uint32_t c = 0; c < h.coupling_count(); c++) {
        auto spins = adj.spins_of(c);
        EXPECT_EQ(std::vector<uint32_t>(spins.begin(), spins.end()), h.couplings[c]);
        for (uint32_t s : spins) {
            degree[s]++;
            auto cs = adj.couplings_of(s);
            EXPECT_NE(std::find(cs.begin(), cs.end(), c), cs.end());
        }
    }
    for (uint32_t s = 0; s < h.spin_count; s++) {
        EXPECT_EQ(adj.couplings_of(s).size(), degree[s]);
        EXPECT_LE(degree[s], adj.max_degree);
    }
}

TEST(mc_core, local_delta_matches_recount) {
    auto model = haah_model(3, 0.3, 2);
    auto rep = make_replica(model, 0.7, RandomStream(1, 1), InitialSpins::kRandom);
    for (uint32_t s = 0; s < model.spin_count(); s++) {
        int64_t before = model.energy(rep.spins);
        int64_t de = local_delta_e(model, rep, s);
        flip_spin(model, rep, s);
        EXPECT_EQ(model.energy(rep.spins) - before, de);
        EXPECT_EQ(rep.energy, model.energy(rep.spins));
    }
    EXPECT_TRUE(energy_cache_coherent(model, rep));
}

TEST(mc_core, caches_stay_coherent_over_many_sweeps) {
    auto model = haah_model(4, 0.15, 3);
    auto rep = make_replica(model, 0.9, RandomStream(2, 2), InitialSpins::kAllUp);
    SweepSchedule schedule{2, AcceptanceRule::kMetropolis};
    for (int k = 0; k < 200; k++) {
        scheduled_sweep(model, rep, schedule);
    }
    EXPECT_TRUE(energy_cache_coherent(model, rep));
    EXPECT_EQ(rep.sweep_count, 200u);
    rep.energy += 2;
    EXPECT_FALSE(energy_cache_coherent(model, rep));
}

TEST(mc_core, sweeps_are_deterministic) {
    auto model = haah_model(3, 0.1, 4);
    auto a = make_replica(model, 0.5, RandomStream(9, 0), InitialSpins::kRandom);
    auto b = make_replica(model, 0.5, RandomStream(9, 0), InitialSpins::kRandom);
    for (int k = 0; k < 50; k++) {
        metropolis_sweep(model, a);
        metropolis_sweep(model, b);
    }
    EXPECT_EQ(a, b);
}

TEST(mc_core, microcanonical_sweep_conserves_energy) {
    auto model = haah_model(4, 0.2, 5);
    auto rep = make_replica(model, 1.0, RandomStream(3, 0), InitialSpins::kRandom);
    int64_t e = rep.energy;
    uint64_t flips = 0;
    for (int k = 0; k < 50; k++) {
        flips += microcanonical_sweep(model, rep);
        ASSERT_EQ(rep.energy, e);
    }
    EXPECT_GT(flips, 0u);
    EXPECT_TRUE(energy_cache_coherent(model, rep));
}

TEST(mc_core, zero_temperature_never_raises_energy) {
    auto model = haah_model(3, 0.0, 0);
    auto rep = make_replica(model, 50.0, RandomStream(4, 0), InitialSpins::kRandom);
    int64_t e = rep.energy;
    for (int k = 0; k < 100; k++) {
        metropolis_sweep(model, rep);
        ASSERT_LE(rep.energy, e);
        e = rep.energy;
    }
}

TEST(mc_core, infinite_temperature_accepts_everything) {
    auto model = haah_model(3, 0.2, 6);
    auto rep = make_replica(model, 0.0, RandomStream(5, 0), InitialSpins::kRandom);
    EXPECT_EQ(metropolis_sweep(model, rep), model.spin_count());
}

TEST(mc_core, set_beta_rebuilds_the_acceptance_table) {
    auto model = haah_model(2, 0.1, 7);
    auto rep = make_replica(model, 0.3, RandomStream(6, 0), InitialSpins::kRandom);
    set_beta(model, rep, 1.25);
    EXPECT_EQ(rep.beta, 1.25);
    ASSERT_EQ(rep.acceptance.size(), (size_t)(2 * model.adjacency().max_degree + 1));
    for (size_t de = 0; de < rep.acceptance.size(); de++) {
        EXPECT_DOUBLE_EQ(rep.acceptance[de], std::exp(-1.25 * (double)de));
    }
}

TEST(mc_core, restore_rebuilds_caches) {
    auto model = haah_model(3, 0.25, 8);
    auto rep = make_replica(model, 0.8, RandomStream(7, 0), InitialSpins::kRandom);
    for (int k = 0; k < 10; k++) {
        metropolis_sweep(model, rep);
    }
    auto restored = restore_replica(model, rep.spins, rep.beta, rep.rng, rep.sweep_count);
    EXPECT_EQ(restored, rep);
}

TEST(mc_core, tiny_chain_matches_boltzmann) {
    auto h = make_hypergraph(4, {{0, 1}, {1, 2}, {2, 3}, {0, 3}, {0, 1, 2, 3}});
    DisorderRealization d;
    d.eta = {1, -1, 1, 1, -1};
    SpinModel model(h, d);
    double beta = 0.6;
    auto exact = enumerate(h, d, beta);
    auto rep = make_replica(model, beta, RandomStream(11, 0), InitialSpins::kRandom);
    EnergyHistogram hist;
    for (int k = 0; k < 200000; k++) {
        metropolis_sweep(model, rep);
        hist.add(rep.energy);
    }
    EXPECT_LT(total_variation(hist.normalized(), exact.p_of_e), 0.01);
}
