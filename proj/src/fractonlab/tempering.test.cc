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

#include "gtest/gtest.h"
#include "fractonlab/exact_oracle.h"
#include "fractonlab/oracle_suite.h"

using namespace fractonlab;

namespace {

SpinModel small_model() {
    auto h = random_hypergraph(12, 24, 4, 1);
    return SpinModel(h, sample_disorder(h, 0.2, 1));
}

void expect_consistent(const PTState &s) {
    for (uint32_t slot = 0; slot < s.ladder.size(); slot++) {
        uint32_t r = s.replica_at_slot[slot];
        ASSERT_EQ(s.slot_of_replica[r], slot);
        ASSERT_EQ(s.replicas[r].beta, s.ladder.betas[slot]);
    }
}

}  // namespace

TEST(tempering, ladder_construction) {
    auto g = build_ladder(0.2, 1.8, 5, LadderScheme::kGeometric);
    EXPECT_EQ(g.betas.front(), 0.2);
    EXPECT_EQ(g.betas.back(), 1.8);
    for (size_t i = 1; i + 1 < g.size(); i++) {
        EXPECT_NEAR(g.betas[i] / g.betas[i - 1], g.betas[i + 1] / g.betas[i], 1e-12);
    }
    auto l = build_ladder(0.2, 1.8, 5, LadderScheme::kLinear);
    EXPECT_NEAR(l.betas[2], 1.0, 1e-15);
    EXPECT_THROW(build_ladder(1.0, 0.5, 4, LadderScheme::kLinear), std::invalid_argument);
    EXPECT_THROW(build_ladder(0.1, 0.5, 1, LadderScheme::kLinear), std::invalid_argument);
    EXPECT_THROW(make_ladder({0.1, 0.1}), std::invalid_argument);
    EXPECT_THROW(make_ladder({0.1, NAN}), std::invalid_argument);
    EXPECT_EQ(parse_ladder_scheme(ladder_scheme_name(LadderScheme::kLinear)), LadderScheme::kLinear);
    EXPECT_THROW(parse_ladder_scheme("cubic"), std::invalid_argument);
}

TEST(tempering, swap_probability) {
    // Hot slot holding the lower energy: always swap.
    EXPECT_EQ(swap_probability(0.5, 1.0, -20, -10), 1.0);
    EXPECT_DOUBLE_EQ(swap_probability(0.5, 1.0, -10, -20), std::exp(-5.0));
    EXPECT_EQ(swap_probability(0.7, 0.7, 3, 9), 1.0);
}

TEST(tempering, parallel_and_serial_paths_agree) {
    auto model = small_model();
    auto ladder = build_ladder(0.3, 1.5, 6, LadderScheme::kGeometric);
    auto a = make_pt_state(model, ladder, 7, 2);
    auto b = make_pt_state(model, ladder, 7, 2);
    PTOptions pa, pb;
    pa.exec = Execution::kParallel;
    pb.exec = Execution::kSerial;
    for (int k = 0; k < 200; k++) {
        pt_step(model, a, pa);
        pt_step(model, b, pb);
    }
    EXPECT_EQ(a, b);
    expect_consistent(a);
}

TEST(tempering, swaps_permute_slots_and_alternate_pairs) {
    auto model = small_model();
    auto ladder = build_ladder(0.5, 0.6, 5, LadderScheme::kLinear);
    auto s = make_pt_state(model, ladder, 1, 0);
    swap_pass(model, s);
    EXPECT_EQ(s.swaps_proposed, (std::vector<uint64_t>{1, 0, 1, 0}));
    swap_pass(model, s);
    EXPECT_EQ(s.swaps_proposed, (std::vector<uint64_t>{1, 1, 1, 1}));
    PTOptions opt;
    for (int k = 0; k < 500; k++) {
        pt_step(model, s, opt);
        expect_consistent(s);
    }
    auto mix = mixing_report(s);
    for (size_t i = 0; i < mix.acceptance.size(); i++) {
        ASSERT_TRUE(mix.acceptance[i].has_value());
        EXPECT_GT(*mix.acceptance[i], 0.5);
    }
    EXPECT_GT(mix.total_roundtrips, 0u);
    uint64_t sum = 0;
    for (auto r : mix.roundtrips) {
        sum += r;
    }
    EXPECT_EQ(sum, mix.total_roundtrips);
}

TEST(tempering, no_swaps_means_no_proposals) {
    auto model = small_model();
    auto s = make_pt_state(model, build_ladder(0.3, 1.0, 3, LadderScheme::kLinear), 1, 0);
    PTOptions opt;
    opt.swaps_enabled = false;
    for (int k = 0; k < 10; k++) {
        pt_step(model, s, opt);
    }
    auto mix = mixing_report(s);
    EXPECT_FALSE(mix.acceptance[0].has_value());
    EXPECT_EQ(s.replica_at_slot, (std::vector<uint32_t>{0, 1, 2}));
    EXPECT_EQ(s.replicas[0].sweep_count, 100u);
}

TEST(tempering, observer_sees_every_sweep) {
    auto model = small_model();
    auto s = make_pt_state(model, build_ladder(0.3, 1.0, 4, LadderScheme::kLinear), 1, 0);
    std::vector<uint64_t> calls(4, 0);
    SweepObserver obs = [&](uint32_t slot, const ReplicaState &rep) {
        calls[slot]++;
        EXPECT_EQ(rep.beta, s.ladder.betas[slot]);
    };
    advance_replicas(model, s, 7, SweepSchedule{}, Execution::kSerial, &obs);
    EXPECT_EQ(calls, (std::vector<uint64_t>(4, 7)));
}

TEST(tempering, equalize_ladder) {
    auto ladder = build_ladder(0.2, 1.0, 5, LadderScheme::kLinear);
    std::vector<double> flat(4, 0.4);
    auto same = equalize_ladder(ladder, flat);
    for (size_t i = 0; i < ladder.size(); i++) {
        EXPECT_NEAR(same.betas[i], ladder.betas[i], 1e-12);
    }
    // The hard upper interval shrinks; the easy lower ones stretch.
    std::vector<double> skewed{0.9, 0.9, 0.9, 0.05};
    auto moved = equalize_ladder(ladder, skewed);
    EXPECT_EQ(moved.betas.front(), 0.2);
    EXPECT_EQ(moved.betas.back(), 1.0);
    EXPECT_LT(moved.betas.back() - moved.betas[3], ladder.betas.back() - ladder.betas[3]);
    EXPECT_THROW(equalize_ladder(ladder, std::vector<double>(3, 0.5)), std::invalid_argument);
}

TEST(tempering, tuning_narrows_the_acceptance_spread) {
    auto h = map_error_model(build_checkerboard(4), PauliType::kX);
    SpinModel model(h, clean_disorder(h));
    TuneOptions opt;
    opt.seed = 3;
    opt.pilot_sweeps = 2000;
    opt.max_iterations = 6;
    auto initial = build_ladder(0.2, 1.2, 6, LadderScheme::kLinear);
    auto result = tune_ladder(model, initial, opt);
    auto spread = [](const std::vector<double> &a) {
        auto [lo, hi] = std::minmax_element(a.begin(), a.end());
        return *hi - *lo;
    };
    EXPECT_LE(spread(result.final_acceptance), spread(result.initial_acceptance));
    EXPECT_EQ(result.ladder.betas.front(), 0.2);
    EXPECT_EQ(result.ladder.betas.back(), 1.2);
    EXPECT_EQ(tune_ladder(model, initial, opt).ladder, result.ladder);
}

TEST(tempering, slot_marginals_match_exact_boltzmann) {
    auto model = small_model();
    auto ladder = build_ladder(0.3, 1.5, 4, LadderScheme::kGeometric);
    auto samples = sample_tempering(model, ladder, 100000, 10, SweepSchedule{}, 4);
    for (size_t slot = 0; slot < ladder.size(); slot++) {
        auto exact = enumerate(model.hypergraph(), model.disorder(), ladder.betas[slot]);
        EXPECT_LT(total_variation(samples[slot].histogram.normalized(), exact.p_of_e), 0.03) << slot;
    }
}
