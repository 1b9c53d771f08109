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


#include "fractonlab/exact_oracle.h"

#include <cmath>
#include <map>

#include "gtest/gtest.h"

using namespace fractonlab;

namespace {

// Direct sum over configurations, independent of the Gray-code walk.
std::map<int64_t, uint64_t> naive_dos(const CouplingHypergraph &h, const DisorderRealization &d) {
    std::map<int64_t, uint64_t> dos;
    std::vector<int8_t> s(h.spin_count);
    for (uint64_t bits = 0; bits < (uint64_t{1} << h.spin_count); bits++) {
        for (uint32_t i = 0; i < h.spin_count; i++) {
            s[i] = ((bits >> i) & 1) ? -1 : 1;
        }
        dos[energy(h, d, s)]++;
    }
    return dos;
}

double naive_log_z(const std::map<int64_t, uint64_t> &dos, double beta) {
    double z = 0;
    for (auto [e, c] : dos) {
        z += (double)c * std::exp(-beta * (double)e);
    }
    return std::log(z);
}

}  // namespace

TEST(exact_oracle, dos_matches_naive_enumeration) {
    auto h = random_hypergraph(12, 24, 4, 1);
    for (uint64_t r = 0; r < 3; r++) {
        auto d = sample_disorder(h, 0.2, 1, r);
        auto dos = density_of_states(h, d);
        auto naive = naive_dos(h, d);
        EXPECT_EQ(dos.total, uint64_t{1} << 12);
        for (size_t b = 0; b < dos.counts.size(); b++) {
            auto it = naive.find(dos.energy_of(b));
            EXPECT_EQ(dos.counts[b], it == naive.end() ? 0 : it->second);
        }
        EXPECT_EQ(dos, density_of_states(h, d, Execution::kSerial));
    }
}

TEST(exact_oracle, thermodynamics_match_direct_sums) {
    auto h = map_error_model(build_checkerboard(2), PauliType::kX);
    auto d = sample_disorder(h, 0.3, 5);
    auto naive = naive_dos(h, d);
    for (double beta : {0.0, 0.4, 1.3, 20.0}) {
        auto sol = enumerate(h, d, beta);
        EXPECT_NEAR(sol.log_z, naive_log_z(naive, beta), 1e-12 * std::max(1.0, std::abs(sol.log_z)));
        double z = 0, e1 = 0, e2 = 0;
        double shift = naive_log_z(naive, beta);
        for (auto [e, c] : naive) {
            double w = (double)c * std::exp(-beta * (double)e - shift);
            z += w;
            e1 += w * (double)e;
            e2 += w * (double)e * (double)e;
        }
        EXPECT_NEAR(sol.mean_energy, e1 / z, 1e-10);
        EXPECT_NEAR(sol.mean_energy_sq, e2 / z, 1e-9);
    }
}

TEST(exact_oracle, correlator_matches_direct_average) {
    auto h = map_error_model(build_checkerboard(2), PauliType::kX);
    auto d = sample_disorder(h, 0.2, 9);
    double beta = 0.7;
    auto sol = enumerate(h, d, beta, true);
    CorrelatorPlan plan(h);
    std::vector<double> num(2, 0);
    double z = 0;
    std::vector<int8_t> s(h.spin_count);
    for (uint64_t bits = 0; bits < (uint64_t{1} << h.spin_count); bits++) {
        for (uint32_t i = 0; i < h.spin_count; i++) {
            s[i] = ((bits >> i) & 1) ? -1 : 1;
        }
        double w = std::exp(-beta * (double)energy(h, d, s));
        z += w;
        auto g = plan.sample(s);
        for (size_t r = 0; r < g.size(); r++) {
            num[r] += w * g[r];
        }
    }
    ASSERT_EQ(sol.correlator.size(), 2u);
    for (size_t r = 0; r < 2; r++) {
        EXPECT_NEAR(sol.correlator[r], num[r] / z, 1e-12);
    }
}

// Flipping the couplings of a stabilizer image is a gauge transformation, so
// ln Z is unchanged.
TEST(exact_oracle, free_energy_is_a_class_function) {
    auto code = build_checkerboard(2);
    auto h = map_error_model(code, PauliType::kX);
    for (uint64_t r = 0; r < 20; r++) {
        auto d = sample_disorder(h, 0.1, 3, r);
        for (uint32_t s = 0; s < h.spin_count; s++) {
            auto image = stabilizer_image(code, PauliType::kX, s);
            for (double beta : {0.3, nishimori_beta(0.1), 2.0}) {
                EXPECT_NEAR(delta_f(h, d, image, beta), 0.0, 1e-10);
            }
        }
    }
    auto d = clean_disorder(h);
    std::vector<uint32_t> single{0};
    EXPECT_GT(delta_f(h, d, single, 1.0), 0.0);
    EXPECT_EQ(delta_f(h, d, single, 0.0), 0.0);
}

TEST(exact_oracle, rejects_large_instances) {
    auto h = map_error_model(build_checkerboard(4), PauliType::kX);
    EXPECT_THROW(density_of_states(h, clean_disorder(h)), std::invalid_argument);
}

TEST(exact_oracle, ground_state_count) {
    auto h = make_hypergraph(3, {{0, 1}, {1, 2}});
    EXPECT_EQ(exact_gsd_count(h, clean_disorder(h)), 2u);
    auto f = map_error_model(build_haah(2), PauliType::kZ);
    EXPECT_EQ(exact_gsd_count(f, clean_disorder(f)), uint64_t{1} << classical_gsd_exponent(f));
}
