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


#include "fractonlab/ensemble.h"

#include <cmath>

#include "gtest/gtest.h"
#include "fractonlab/exact_oracle.h"

using namespace fractonlab;

namespace {

EnsembleConfig small_config() {
    EnsembleConfig c;
    c.code = CodeKind::kCheckerboard;
    c.lattice_size = 2;
    c.p = 0.1;
    c.realizations = 4;
    c.temperatures = 3;
    c.tau = 8;
    c.beta_min = 0.3;
    c.beta_max = 1.2;
    c.swap_cadence = 10;
    c.seed = 21;
    return c;
}

std::vector<double> random_values(RandomStream &rng, size_t n, double lo, double hi) {
    std::vector<double> v(n);
    for (auto &x : v) {
        x = lo + (hi - lo) * rng.uniform();
    }
    return v;
}

}  // namespace

TEST(ensemble, jackknife_of_the_mean_is_the_standard_error) {
    RandomStream rng(1, 0);
    for (int set = 0; set < 10; set++) {
        auto v = random_values(rng, 5 + rng.below(40), -3, 7);
        double n = (double)v.size(), mean = 0, ss = 0;
        for (double x : v) {
            mean += x;
        }
        mean /= n;
        for (double x : v) {
            ss += (x - mean) * (x - mean);
        }
        auto j = jackknife_mean(v);
        EXPECT_NEAR(j.value, mean, 1e-12);
        EXPECT_NEAR(j.error, std::sqrt(ss / (n - 1) / n), 1e-12);
        EXPECT_EQ(j.n_samples, v.size());
    }
}

TEST(ensemble, jackknife_ratio_matches_leave_one_out) {
    RandomStream rng(2, 0);
    for (int set = 0; set < 10; set++) {
        size_t n = 3 + rng.below(30);
        auto num = random_values(rng, n, 0, 5);
        auto den = random_values(rng, n, 1, 2);
        std::vector<double> loo(n);
        for (size_t k = 0; k < n; k++) {
            double a = 0, b = 0;
            for (size_t i = 0; i < n; i++) {
                if (i != k) {
                    a += num[i];
                    b += den[i];
                }
            }
            loo[k] = a / b;
        }
        double full_a = 0, full_b = 0, mean = 0, ss = 0;
        for (size_t i = 0; i < n; i++) {
            full_a += num[i];
            full_b += den[i];
        }
        for (double t : loo) {
            mean += t;
        }
        mean /= (double)n;
        for (double t : loo) {
            ss += (t - mean) * (t - mean);
        }
        double dn = (double)n;
        auto j = jackknife_ratio(num, den);
        EXPECT_EQ(j.value, dn * (full_a / full_b) - (dn - 1) * mean);
        EXPECT_EQ(j.error, std::sqrt((dn - 1) / dn * ss));
    }
    EXPECT_THROW(jackknife_mean(std::vector<double>{1.0}), std::invalid_argument);
}

TEST(ensemble, config_validation_names_the_field) {
    auto c = small_config();
    c.lattice_size = 3;
    try {
        c.validate();
        FAIL();
    } catch (const std::invalid_argument &e) {
        EXPECT_NE(std::string(e.what()).find("L"), std::string::npos);
    }
    c = small_config();
    c.realizations = 1;
    EXPECT_THROW(c.validate(), std::invalid_argument);
    c = small_config();
    c.beta_max = 0.1;
    EXPECT_THROW(c.validate(), std::invalid_argument);
    c = small_config();
    c.p = 1.5;
    EXPECT_THROW(c.validate(), std::invalid_argument);
    EXPECT_NO_THROW(small_config().validate());
}

TEST(ensemble, config_json_round_trip) {
    auto c = small_config();
    c.betas = {0.2, 0.5, 0.9};
    c.tune_ladder = true;
    auto back = EnsembleConfig::from_json(c.to_json());
    EXPECT_EQ(back.to_json(), c.to_json());
    EXPECT_EQ(configured_ladder(back).betas, c.betas);
}

TEST(ensemble, runs_are_deterministic_across_execution_modes) {
    auto c = small_config();
    auto h = ensemble_hypergraph(c);
    auto ladder = configured_ladder(c);
    auto a = run_realization(c, h, ladder, 1, Execution::kParallel);
    auto b = run_realization(c, h, ladder, 1, Execution::kSerial);
    EXPECT_EQ(a, b);
    EXPECT_NE(a, run_realization(c, h, ladder, 2));
    EXPECT_EQ(a.sweeps, c.total_sweeps());
    for (const auto &s : a.slots) {
        EXPECT_EQ(s.histogram.total, c.thermalization_sweeps());
        EXPECT_EQ(s.correlator->count(), c.thermalization_sweeps());
        EXPECT_EQ(s.energy_series.length(), c.total_sweeps() + 1);
    }
    EXPECT_EQ(a.total_energy_series.length(), c.total_sweeps() + 1);
}

TEST(ensemble, trajectory_does_not_depend_on_chunking) {
    auto c = small_config();
    c.swap_cadence = 7;
    auto h = ensemble_hypergraph(c);
    auto ladder = configured_ladder(c);
    auto whole = run_realization(c, h, ladder, 0, Execution::kSerial);
    RealizationRunner runner(c, h, ladder, 0);
    uint64_t steps[] = {1, 13, 100, 3, 250};
    int k = 0;
    while (!runner.finished()) {
        runner.advance(steps[k++ % 5], Execution::kSerial);
        // Round-trip through the saved form at every stop.
        runner = RealizationRunner::load(c, h, ladder, nlohmann::json::parse(runner.save().dump()));
    }
    EXPECT_EQ(runner.bundle(), whole);
}

TEST(ensemble, bundle_json_round_trip) {
    auto c = small_config();
    auto b = run_realization(c, ensemble_hypergraph(c), configured_ladder(c), 3);
    auto j = nlohmann::json::parse(bundle_to_json(b).dump());
    EXPECT_EQ(bundle_from_json(j), b);
}

TEST(ensemble, slot_histograms_match_exact_boltzmann) {
    auto c = small_config();
    c.tau = 16;
    auto h = ensemble_hypergraph(c);
    auto ladder = configured_ladder(c);
    auto b = run_realization(c, h, ladder, 0);
    auto d = sample_disorder(h, c.p, c.seed, 0);
    for (size_t s = 0; s < ladder.size(); s++) {
        auto exact = enumerate(h, d, ladder.betas[s], true);
        EXPECT_LT(total_variation(b.slots[s].histogram.normalized(), exact.p_of_e), 0.02) << s;
        auto prof = b.slots[s].correlator->profile();
        for (size_t r = 0; r < prof.g.size(); r++) {
            EXPECT_NEAR(prof.g[r], exact.correlator[r], 0.03) << s << " " << r;
        }
    }
}

TEST(ensemble, aggregate_uses_equilibrated_bundles) {
    auto c = small_config();
    auto h = ensemble_hypergraph(c);
    auto ladder = configured_ladder(c);
    std::vector<RealizationBundle> bundles;
    for (uint32_t i = 0; i < c.realizations; i++) {
        bundles.push_back(run_realization(c, h, ladder, i));
        bundles.back().equilibration.equilibrated = true;
    }
    bundles[2].equilibration.equilibrated = false;
    auto result = aggregate(c, bundles);
    EXPECT_EQ(result.effective_realizations, 3u);
    EXPECT_EQ(result.excluded, (std::vector<uint32_t>{2}));
    ASSERT_EQ(result.records.size(), ladder.size());
    for (size_t s = 0; s < ladder.size(); s++) {
        std::vector<double> e, chi;
        for (uint32_t i : {0u, 1u, 3u}) {
            auto m = slot_moments(bundles[i].slots[s], bundles[i].spin_count, bundles[i].coupling_count);
            e.push_back(m.energy);
            chi.push_back(m.susceptibility);
        }
        const auto &rec = result.records[s];
        EXPECT_EQ(rec.beta, ladder.betas[s]);
        EXPECT_NEAR(rec.energy.value, jackknife_mean(e).value, 1e-12);
        EXPECT_NEAR(rec.energy.error, jackknife_mean(e).error, 1e-12);
        EXPECT_NEAR(rec.susceptibility.value, jackknife_mean(chi).value, 1e-12);
        EXPECT_NEAR(rec.order_parameter.value, -rec.energy.value / 8.0, 1e-12);
        double total = 0;
        for (double p : rec.histogram.probability) {
            total += p;
        }
        EXPECT_NEAR(total, 1.0, 1e-12);
        ASSERT_TRUE(rec.correlator.has_value());
        EXPECT_NEAR(rec.correlator->g[0], 1.0, 1e-12);
    }
    bundles[0].equilibration.equilibrated = false;
    bundles[1].equilibration.equilibrated = false;
    EXPECT_THROW(aggregate(c, bundles), std::runtime_error);
}

TEST(ensemble, slot_moments_from_histogram) {
    SlotStats s;
    s.beta = 2.0;
    s.histogram.add(-8, 3);
    s.histogram.add(-4, 1);
    auto m = slot_moments(s, 4, 8);
    EXPECT_DOUBLE_EQ(m.energy, -7.0);
    EXPECT_DOUBLE_EQ(m.energy_sq, (3 * 64.0 + 16) / 4);
    EXPECT_DOUBLE_EQ(m.specific_heat, 4.0 * 3.0 / 4);
    EXPECT_DOUBLE_EQ(m.order_parameter, 7.0 / 8);
    EXPECT_DOUBLE_EQ(m.susceptibility, 2.0 * 4 * 3.0 / 64);
}

TEST(ensemble, interrupted_run_resumes_bit_identically) {
    auto c = small_config();
    auto reference = start_ensemble(c, Execution::kSerial);
    RunControl serial;
    serial.exec = Execution::kSerial;
    ASSERT_TRUE(run_ensemble(c, reference, serial));

    auto progress = start_ensemble(c);
    RunControl budgeted;
    budgeted.sweep_budget = 97;
    int sessions = 0;
    while (!run_ensemble(c, progress, budgeted)) {
        progress = checkpoint_from_json(c, nlohmann::json::parse(checkpoint_to_json(c, progress).dump()));
        sessions++;
    }
    EXPECT_GT(sessions, 2);
    ASSERT_EQ(progress.completed.size(), reference.completed.size());
    for (const auto &[idx, b] : reference.completed) {
        EXPECT_EQ(progress.completed.at(idx), b) << idx;
    }
}

TEST(ensemble, stop_flag_halts_between_chunks) {
    auto c = small_config();
    auto progress = start_ensemble(c);
    std::atomic<bool> stop{true};
    RunControl control;
    control.stop = &stop;
    EXPECT_FALSE(run_ensemble(c, progress, control));
    EXPECT_TRUE(progress.completed.empty());
    stop = false;
    EXPECT_TRUE(run_ensemble(c, progress, control));
}

TEST(ensemble, checkpoint_rejects_a_different_config) {
    auto c = small_config();
    auto progress = start_ensemble(c);
    auto j = checkpoint_to_json(c, progress);
    auto other = c;
    other.seed = 22;
    try {
        checkpoint_from_json(other, j);
        FAIL();
    } catch (const std::invalid_argument &e) {
        EXPECT_NE(std::string(e.what()).find("'seed'"), std::string::npos) << e.what();
    }
    j["magic"] = "something else";
    EXPECT_THROW(checkpoint_from_json(c, j), std::invalid_argument);
}

TEST(ensemble, load_validates_the_saved_state) {
    auto c = small_config();
    auto h = ensemble_hypergraph(c);
    auto ladder = configured_ladder(c);
    RealizationRunner runner(c, h, ladder, 0);
    runner.advance(20, Execution::kSerial);
    auto j = runner.save();
    EXPECT_THROW(
        RealizationRunner::load(c, h, build_ladder(0.3, 1.3, 3, LadderScheme::kGeometric), j), std::invalid_argument);
    auto bad = j;
    bad["slot_of_replica"] = {0, 0, 1};
    EXPECT_THROW(RealizationRunner::load(c, h, ladder, bad), std::invalid_argument);
    bad = j;
    bad["replicas"][0]["spins"] = "+-";
    EXPECT_THROW(RealizationRunner::load(c, h, ladder, bad), std::invalid_argument);
    auto other = ensemble_hypergraph([&] {
        auto o = c;
        o.lattice_size = 4;
        return o;
    }());
    EXPECT_THROW(RealizationRunner::load(c, other, ladder, j), std::invalid_argument);
}
