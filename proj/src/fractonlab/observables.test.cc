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


#include "fractonlab/observables.h"

#include <cmath>
#include <numbers>
#include <sstream>

#include "gtest/gtest.h"
#include "fractonlab/rng.h"

using namespace fractonlab;

TEST(observables, histogram_grows_in_both_directions) {
    std::vector<int64_t> samples{-2, 4, -6, 4, 0};
    auto h = accumulate_histogram(samples);
    EXPECT_EQ(h.e_min, -6);
    EXPECT_EQ(h.counts, (std::vector<uint64_t>{1, 0, 1, 1, 0, 2}));
    EXPECT_EQ(h.total, 5u);
    auto p = h.normalized();
    EXPECT_DOUBLE_EQ(p.mean(), 0.0);
    EXPECT_DOUBLE_EQ(p.mean_sq(), (4.0 + 16 + 36 + 16) / 5);
    EXPECT_THROW(h.add(1), std::invalid_argument);
}

TEST(observables, merge_is_count_wise) {
    auto a = accumulate_histogram(std::vector<int64_t>{-4, -4, 0});
    auto b = accumulate_histogram(std::vector<int64_t>{2, -8});
    auto m = merge_histograms(a, b);
    EXPECT_EQ(m.e_min, -8);
    EXPECT_EQ(m.total, 5u);
    EXPECT_EQ(m, accumulate_histogram(std::vector<int64_t>{-4, -4, 0, 2, -8}));
}

TEST(observables, reweighting_matches_closed_form) {
    EnergyHistogram h;
    h.add(-4, 10);
    h.add(-2, 30);
    h.add(0, 60);
    auto r = reweight_histogram(h, 0.5, 0.8);
    double w[3] = {10 * std::exp(0.3 * 4), 30 * std::exp(0.3 * 2), 60.0};
    double z = w[0] + w[1] + w[2];
    for (int b = 0; b < 3; b++) {
        EXPECT_NEAR(r.histogram.probability[b], w[b] / z, 1e-15);
    }
    EXPECT_TRUE(r.low_effective_sample_size);
    EXPECT_FALSE(reweight_histogram(h, 0.5, 0.5, 50).low_effective_sample_size);
    EXPECT_NEAR(reweight_histogram(h, 0.5, 0.5).effective_sample_size, 100.0, 1e-9);
}

TEST(observables, reweighting_round_trip_is_identity) {
    NormalizedHistogram p;
    p.e_min = -10;
    p.probability = {0.1, 0.2, 0.3, 0.25, 0.15};
    auto back = reweight_distribution(reweight_distribution(p, 1.0, 1.4), 1.4, 1.0);
    for (size_t b = 0; b < p.probability.size(); b++) {
        EXPECT_NEAR(back.probability[b], p.probability[b], 1e-15);
    }
}

TEST(observables, total_variation_on_shifted_grids) {
    NormalizedHistogram a, b;
    a.e_min = -4;
    a.probability = {0.5, 0.5};
    b.e_min = -2;
    b.probability = {0.5, 0.5};
    EXPECT_DOUBLE_EQ(total_variation(a, b), 0.5);
    EXPECT_DOUBLE_EQ(total_variation(a, a), 0.0);
    b.e_min = -3;
    EXPECT_THROW(total_variation(a, b), std::invalid_argument);
}

TEST(observables, fluctuation_estimators) {
    std::vector<double> e{1, 2, 3, 4};
    EXPECT_DOUBLE_EQ(specific_heat(e, 2.0, 10.0), 4.0 * 1.25 / 10.0);
    EXPECT_DOUBLE_EQ(susceptibility(e, 2.0, 10.0), 2.0 * 10.0 * 1.25);
    EXPECT_DOUBLE_EQ(order_parameter(-30, 40), 0.75);
    EXPECT_THROW(specific_heat(std::vector<double>{1}, 1, 1), std::invalid_argument);
}

// Lattice Ornstein-Zernike profile G(q) = 1 / (4 sin^2(q/2) + m^2) has xi = 1/m.
TEST(observables, second_moment_length_of_ornstein_zernike_profile) {
    for (int L : {8, 12, 16}) {
        for (double m : {0.3, 0.7, 1.5}) {
            std::vector<double> g(L, 0);
            for (int n = 0; n < L; n++) {
                double q = 2 * std::numbers::pi * n / L;
                double gq = 1 / (4 * std::pow(std::sin(q / 2), 2) + m * m);
                for (int r = 0; r < L; r++) {
                    g[r] += std::cos(q * r) * gq / L;
                }
            }
            auto xi = xi_second_moment(g);
            ASSERT_TRUE(xi.has_value());
            EXPECT_NEAR(*xi, 1 / m, 1e-10);
        }
    }
}

TEST(observables, second_moment_length_undefined_cases) {
    EXPECT_FALSE(xi_second_moment(std::vector<double>(8, 0.4)).has_value());
    EXPECT_FALSE(xi_second_moment(std::vector<double>{1.0}).has_value());
    std::vector<double> alternating{1, -1, 1, -1, 1, -1};
    EXPECT_FALSE(xi_second_moment(alternating).has_value());
    std::vector<double> delta(8, 0);
    delta[0] = 1;
    EXPECT_NEAR(*xi_second_moment(delta), 0.0, 1e-12);
}

TEST(observables, correlator_matches_definition) {
    int L = 4;
    auto h = map_error_model(build_checkerboard(L), PauliType::kX);
    CorrelatorPlan plan(h);
    RandomStream rng(2, 0);
    std::vector<int8_t> spins(h.spin_count);
    for (auto &s : spins) {
        s = rng.bernoulli(0.5) ? -1 : 1;
    }
    auto g = plan.sample(spins);
    ASSERT_EQ(g.size(), (size_t)L);
    for (int r = 0; r < L; r++) {
        double sum = 0;
        for (uint32_t v = 0; v < h.spin_count; v++) {
            auto [x, y, z] = h.spin_positions[v];
            auto at = [&](int a, int b, int c) { return spins[h.spin_at(a, b, c)]; };
            int second = r % 2 ? at(x, y + 1, z + r) * at(x + 1, y, z + r) : at(x, y, z + r) * at(x + 1, y + 1, z + r);
            sum += at(x, y, z) * at(x + 1, y + 1, z) * second;
        }
        EXPECT_DOUBLE_EQ(g[r], sum / h.spin_count);
    }
    EXPECT_DOUBLE_EQ(g[0], 1.0);
    auto up = plan.sample(std::vector<int8_t>(h.spin_count, 1));
    EXPECT_EQ(up, std::vector<double>(L, 1.0));
    EXPECT_THROW(CorrelatorPlan(map_error_model(build_haah(2), PauliType::kX)), std::invalid_argument);
}

TEST(observables, correlator_accumulator_statistics) {
    CorrelatorAccumulator acc(2);
    acc.add(std::vector<double>{1.0, 0.2});
    acc.add(std::vector<double>{1.0, 0.4});
    acc.add(std::vector<double>{1.0, 0.6});
    auto prof = acc.profile();
    EXPECT_DOUBLE_EQ(prof.g[1], 0.4);
    EXPECT_NEAR(prof.error[1], std::sqrt(0.04 / 3), 1e-12);
    EXPECT_DOUBLE_EQ(prof.error[0], 0.0);
    auto copy = CorrelatorAccumulator::from_sums(2, acc.count(), acc.sums(), acc.sums_sq());
    EXPECT_EQ(copy, acc);
}

TEST(observables, log_bins_cover_powers_of_two) {
    std::vector<double> series(37);
    for (size_t t = 0; t < series.size(); t++) {
        series[t] = (double)t;
    }
    auto b = log_bin(series);
    ASSERT_EQ(b.bins.size(), 6u);
    for (int tau = 0; tau < 5; tau++) {
        EXPECT_EQ(b.bins[tau].count, uint64_t{1} << tau);
        EXPECT_TRUE(b.bins[tau].complete);
        double lo = (double)(1 << tau), hi = (double)((2 << tau) - 1);
        EXPECT_DOUBLE_EQ(b.bins[tau].mean, (lo + hi) / 2);
    }
    EXPECT_EQ(b.bins[5].count, 5u);
    EXPECT_FALSE(b.bins[5].complete);
    LogBinAccumulator acc;
    for (double v : series) {
        acc.add(v);
    }
    EXPECT_EQ(acc.binned(), b);
    EXPECT_EQ(LogBinAccumulator::from_bins(acc.length(), acc.raw_bins()), acc);
}

TEST(observables, equilibration_check_on_flat_and_drifting_series) {
    RandomStream rng(4, 0);
    std::vector<double> flat(1 << 12), drift(1 << 12);
    for (size_t t = 0; t < flat.size(); t++) {
        flat[t] = t % 2 ? 0.5 : -0.5;
        drift[t] = rng.uniform() - 0.5 - 50.0 / std::sqrt(1.0 + (double)t);
    }
    auto ok = equilibration_check(flat);
    EXPECT_TRUE(ok.equilibrated) << ok.diagnostic;
    EXPECT_EQ(ok.tau_first, 3);
    auto bad = equilibration_check(drift);
    EXPECT_FALSE(bad.equilibrated);
    EXPECT_EQ(bad.tau_first, -1);
    EXPECT_FALSE(bad.diagnostic.empty());
    EXPECT_FALSE(equilibration_check(std::vector<double>(8, 1.0)).equilibrated);
}

TEST(observables, text_round_trips) {
    auto h = accumulate_histogram(std::vector<int64_t>{-6, -2, -2, 0});
    std::stringstream hs;
    write_histogram_text(h, hs);
    EXPECT_EQ(hs.str().substr(0, hs.str().find('\n')), "-6 2 4 4");
    EXPECT_EQ(read_histogram_text(hs), h);

    CorrelatorProfile p{3, {1.0, 0.25, -0.125}, {0.0, 0.01, 0.02}};
    std::stringstream cs;
    write_correlator_text(p, cs);
    auto q = read_correlator_text(cs);
    EXPECT_EQ(q.lattice_size, 3);
    EXPECT_EQ(q.g, p.g);
    EXPECT_EQ(q.error, p.error);
}
