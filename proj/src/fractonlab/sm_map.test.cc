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


#include "fractonlab/sm_map.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "gtest/gtest.h"
#include "fractonlab/exact_oracle.h"
#include "fractonlab/rng.h"

using namespace fractonlab;

namespace {

std::vector<int8_t> random_spins(uint32_t n, RandomStream &rng) {
    std::vector<int8_t> s(n);
    for (auto &v : s) {
        v = rng.bernoulli(0.5) ? -1 : +1;
    }
    return s;
}

// Haah exponent from the closed-form branches; -1 when no branch applies.
int haah_formula_exponent(int L) {
    for (int n = 1; (1 << n) <= L; n++) {
        if (L == (1 << n)) {
            return 2 * L - 1;
        }
    }
    for (int n = 1; (1 << (2 * n)) - 1 <= L; n++) {
        if (L == (1 << (2 * n)) - 1) {
            return 2 * L - 5;
        }
    }
    for (int m = 1; m < 8; m++) {
        for (int n = 1; n < 8; n++) {
            if (L == (1 << (m - 1)) * ((1 << n) + 1) || L == (1 << (m - 1)) * ((1 << (2 * n - 1)) - 1)) {
                return (1 << m) - 1;
            }
        }
    }
    return -1;
}

}  // namespace

// The checkerboard image is the FCC model: one 4-spin term on every up and
// down tetrahedron anchored at an even site.
TEST(sm_map, checkerboard_maps_to_fcc_tetrahedra) {
    int L = 4;
    auto h = map_error_model(build_checkerboard(L), PauliType::kX);
    EXPECT_EQ(h.geometry, Geometry::kCheckerboardFcc);
    ASSERT_EQ(h.spin_count, 32u);
    ASSERT_EQ(h.coupling_count(), 64u);
    auto w = [L](int c) { return ((c % L) + L) % L; };
    std::set<std::set<std::array<int, 3>>> expected;
    for (int z = 0; z < L; z++) {
        for (int y = 0; y < L; y++) {
            for (int x = 0; x < L; x++) {
                if ((x + y + z) % 2) {
                    continue;
                }
                for (int s : {+1, -1}) {
                    expected.insert({
                        {x, y, z},
                        {w(x + s), w(y + s), z},
                        {x, w(y + s), w(z + s)},
                        {w(x + s), y, w(z + s)},
                    });
                }
            }
        }
    }
    std::set<std::set<std::array<int, 3>>> actual;
    for (const auto &c : h.couplings) {
        std::set<std::array<int, 3>> t;
        for (uint32_t s : c) {
            t.insert(h.spin_positions[s]);
        }
        actual.insert(t);
    }
    EXPECT_EQ(actual, expected);
}

TEST(sm_map, frustration_equals_syndrome_for_single_qubit_errors) {
    for (auto &[code, type] : std::vector<std::pair<StabilizerCode, PauliType>>{
             {build_checkerboard(4), PauliType::kX},
             {build_checkerboard(4), PauliType::kZ},
             {build_haah(2), PauliType::kX},
             {build_haah(2), PauliType::kZ},
         }) {
        auto h = map_error_model(code, type);
        for (uint32_t q = 0; q < code.qubit_count; q++) {
            auto d = flip_couplings(clean_disorder(h), std::vector<uint32_t>{q});
            auto s = syndrome(code, ErrorConfig{{q}, type});
            ASSERT_EQ(s.violated.size(), 4u);
            EXPECT_EQ(frustrated_checks(code, type, d), s.violated) << "qubit " << q;
        }
    }
}

TEST(sm_map, frustration_equals_syndrome_for_random_errors) {
    auto code = build_haah(3);
    auto h = map_error_model(code, PauliType::kZ);
    for (uint64_t r = 0; r < 20; r++) {
        auto d = sample_disorder(h, 0.2, 11, r);
        std::vector<uint32_t> flipped;
        for (uint32_t q = 0; q < d.eta.size(); q++) {
            if (d.eta[q] < 0) {
                flipped.push_back(q);
            }
        }
        EXPECT_EQ(frustrated_checks(code, PauliType::kZ, d), syndrome(code, {flipped, PauliType::kZ}).violated);
    }
}

TEST(sm_map, stabilizer_image_is_a_gauge_transformation) {
    auto code = build_checkerboard(4);
    auto h = map_error_model(code, PauliType::kX);
    auto d = sample_disorder(h, 0.3, 2);
    RandomStream rng(3, 0);
    for (uint32_t s = 0; s < h.spin_count; s++) {
        auto image = stabilizer_image(code, PauliType::kX, s);
        EXPECT_EQ(image.size(), 8u);
        auto spins = random_spins(h.spin_count, rng);
        auto flipped = spins;
        flipped[s] = (int8_t)-flipped[s];
        EXPECT_EQ(energy(h, flip_couplings(d, image), flipped), energy(h, d, spins));
    }
}

TEST(sm_map, plane_flips_preserve_clean_checkerboard_energy) {
    RandomStream rng(17, 0);
    for (int L : {4, 6}) {
        auto h = map_error_model(build_checkerboard(L), PauliType::kX);
        auto d = clean_disorder(h);
        for (int trial = 0; trial < 100; trial++) {
            auto spins = random_spins(h.spin_count, rng);
            int64_t e = energy(h, d, spins);
            for (int axis = 0; axis < 3; axis++) {
                for (int c = 0; c < L; c++) {
                    auto plane = plane_spins(h, axis, c);
                    EXPECT_EQ(plane.size(), (size_t)(L * L / 2));
                    auto f = spins;
                    for (uint32_t s : plane) {
                        f[s] = (int8_t)-f[s];
                    }
                    ASSERT_EQ(energy(h, d, f), e);
                }
            }
        }
    }
}

TEST(sm_map, checkerboard_classical_exponent) {
    for (int L : {2, 4, 6, 8}) {
        auto h = map_error_model(build_checkerboard(L), PauliType::kX);
        EXPECT_EQ(classical_gsd_exponent(h), 3 * L - 3) << L;
    }
}

TEST(sm_map, haah_classical_exponent_matches_closed_form) {
    for (int L = 2; L <= 8; L++) {
        int expected = haah_formula_exponent(L);
        ASSERT_GE(expected, 0) << L;
        for (auto type : {PauliType::kX, PauliType::kZ}) {
            EXPECT_EQ(classical_gsd_exponent(map_error_model(build_haah(L), type)), expected) << L;
        }
    }
}

TEST(sm_map, exact_ground_state_count_matches_rank) {
    auto h = map_error_model(build_checkerboard(2), PauliType::kX);
    EXPECT_EQ(exact_gsd_count(h, clean_disorder(h)), uint64_t{1} << classical_gsd_exponent(h));
    auto f = map_error_model(build_haah(2), PauliType::kX);
    EXPECT_EQ(exact_gsd_count(f, clean_disorder(f)), uint64_t{1} << classical_gsd_exponent(f));
}

TEST(sm_map, energy_bounds_and_sign) {
    auto h = map_error_model(build_haah(2), PauliType::kX);
    std::vector<int8_t> up(h.spin_count, +1);
    EXPECT_EQ(energy(h, clean_disorder(h), up), -(int64_t)h.coupling_count());
    auto all_negative = clean_disorder(h);
    std::fill(all_negative.eta.begin(), all_negative.eta.end(), -1);
    EXPECT_EQ(energy(h, all_negative, up), (int64_t)h.coupling_count());
    EXPECT_THROW(energy(h, all_negative, std::vector<int8_t>(3, 1)), std::invalid_argument);
}

TEST(sm_map, nishimori_line) {
    for (int i = 1; i < 100; i++) {
        double p = 0.5 * i / 100;
        double b = nishimori_beta(p);
        EXPECT_NEAR(std::tanh(b), 1 - 2 * p, 1e-12);
        EXPECT_NEAR(nishimori_p(b), p, 1e-14);
    }
    EXPECT_EQ(nishimori_beta(0.5), 0.0);
    EXPECT_TRUE(std::isinf(nishimori_beta(0)));
    EXPECT_THROW(nishimori_beta(-0.1), std::invalid_argument);
}

TEST(sm_map, disorder_is_deterministic_and_has_the_right_rate) {
    auto h = map_error_model(build_checkerboard(8), PauliType::kX);
    EXPECT_EQ(sample_disorder(h, 0.1, 4, 2), sample_disorder(h, 0.1, 4, 2));
    EXPECT_NE(sample_disorder(h, 0.1, 4, 2).eta, sample_disorder(h, 0.1, 4, 3).eta);
    size_t negative = 0, total = 0;
    for (uint64_t r = 0; r < 50; r++) {
        for (int8_t e : sample_disorder(h, 0.1, 4, r).eta) {
            negative += e < 0;
            total++;
        }
    }
    double rate = (double)negative / (double)total;
    EXPECT_NEAR(rate, 0.1, 5 * std::sqrt(0.09 / (double)total));
    EXPECT_THROW(sample_disorder(h, 1.5, 0), std::invalid_argument);
}

TEST(sm_map, random_hypergraph_is_distinct_and_covering) {
    auto h = random_hypergraph(12, 24, 4, 1);
    EXPECT_EQ(h.spin_count, 12u);
    ASSERT_EQ(h.coupling_count(), 24u);
    std::set<std::vector<uint32_t>> seen(h.couplings.begin(), h.couplings.end());
    EXPECT_EQ(seen.size(), 24u);
    std::set<uint32_t> covered;
    for (const auto &c : h.couplings) {
        EXPECT_EQ(c.size(), 4u);
        covered.insert(c.begin(), c.end());
    }
    EXPECT_EQ(covered.size(), 12u);
    EXPECT_EQ(random_hypergraph(12, 24, 4, 1), h);
}

TEST(sm_map, text_round_trips) {
    auto h = map_error_model(build_haah(3), PauliType::kZ);
    auto d = sample_disorder(h, 0.25, 8);
    std::stringstream ds;
    write_disorder_text(d, ds);
    EXPECT_EQ(read_disorder_text(ds), d);
    std::stringstream hs;
    write_hypergraph_text(h, hs);
    EXPECT_EQ(read_hypergraph_text(hs), h);
}

TEST(sm_map, plain_hypergraph_validation) {
    EXPECT_THROW(make_hypergraph(3, {{0, 0}}), std::invalid_argument);
    EXPECT_THROW(make_hypergraph(3, {{0, 3}}), std::invalid_argument);
    EXPECT_THROW(make_hypergraph(3, {{}}), std::invalid_argument);
    auto h = make_hypergraph(3, {{2, 0}});
    EXPECT_EQ(h.couplings[0], (std::vector<uint32_t>{0, 2}));
    EXPECT_THROW(plane_spins(h, 0, 0), std::invalid_argument);
}
