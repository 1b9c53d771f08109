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


#include "fractonlab/cli/config.h"

#include "gtest/gtest.h"

using namespace fractonlab;

namespace {

const char *kDesk = R"([model]
code = checkerboard
sector = X
L = 2, 4
p = 0.05, 0.1

[ensemble]
N_d = 20
N_T = 8
tau = 12
seed = 7

[ladder]
beta_min = 0.3
beta_max = 1.5
scheme = linear

[tempering]
swap_cadence = 5
microcanonical_per_metropolis = 2

[analysis]
min_equilibrated_fraction = 0.75
)";

std::string replace(std::string text, const std::string &from, const std::string &to) {
    text.replace(text.find(from), from.size(), to);
    return text;
}

void expect_error_mentions(const std::string &text, const std::string &needle) {
    try {
        parse_run_config(text);
        FAIL() << "expected an error mentioning " << needle;
    } catch (const std::invalid_argument &e) {
        EXPECT_NE(std::string(e.what()).find(needle), std::string::npos) << e.what();
    }
}

}  // namespace

TEST(config, expands_every_size_and_rate) {
    auto rc = parse_run_config(kDesk);
    ASSERT_EQ(rc.ensembles.size(), 4u);
    const auto &c = rc.ensembles[3];
    EXPECT_EQ(c.lattice_size, 4);
    EXPECT_EQ(c.p, 0.1);
    EXPECT_EQ(c.realizations, 20u);
    EXPECT_EQ(c.temperatures, 8u);
    EXPECT_EQ(c.tau, 12);
    EXPECT_EQ(c.seed, 7u);
    EXPECT_EQ(c.ladder_scheme, LadderScheme::kLinear);
    EXPECT_EQ(c.swap_cadence, 5u);
    EXPECT_EQ(c.microcanonical_per_metropolis, 2u);
    EXPECT_EQ(c.min_equilibrated_fraction, 0.75);
    EXPECT_EQ(ensemble_tag(rc.ensembles[0]), "L2_p0.05");
    EXPECT_EQ(ensemble_tag(c), "L4_p0.1");
}

TEST(config, large_scale_row_parses) {
    auto rc = parse_run_config(R"([model]
code = checkerboard
L = 10
p = 0.105
[ensemble]
N_d = 500
N_T = 64
tau = 20
seed = 1
[ladder]
beta_min = 0.8
beta_max = 1.3
)");
    ASSERT_EQ(rc.ensembles.size(), 1u);
    EXPECT_EQ(rc.ensembles[0].realizations, 500u);
    EXPECT_EQ(rc.ensembles[0].temperatures, 64u);
    EXPECT_EQ(rc.ensembles[0].tau, 20);
    EXPECT_EQ(rc.ensembles[0].ladder_scheme, LadderScheme::kGeometric);
}

TEST(config, explicit_betas) {
    auto text = replace(kDesk, "beta_min = 0.3\nbeta_max = 1.5\n", "betas = 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9\n");
    auto rc = parse_run_config(text);
    EXPECT_EQ(configured_ladder(rc.ensembles[0]).betas.back(), 0.9);
    expect_error_mentions(replace(text, ", 0.9", ""), "ladder.betas");
}

TEST(config, missing_and_malformed_fields_are_named) {
    expect_error_mentions(replace(kDesk, "N_d = 20\n", ""), "ensemble.N_d");
    expect_error_mentions(replace(kDesk, "tau = 12", "tau = twelve"), "ensemble.tau");
    expect_error_mentions(replace(kDesk, "code = checkerboard", "code = toric"), "model.code");
    expect_error_mentions(replace(kDesk, "scheme = linear", "scheme = cubic"), "ladder.scheme");
    expect_error_mentions(replace(kDesk, "seed = 7", "seed = 7\nsede = 3"), "ensemble.sede");
    expect_error_mentions(replace(kDesk, "[analysis]", "[extras]"), "extras");
    expect_error_mentions(replace(kDesk, "L = 2, 4", "L = 3"), "L");
    expect_error_mentions(replace(kDesk, "p = 0.05, 0.1", "p = "), "model.p");
    expect_error_mentions("[model\ncode = x\n", "Malformed");
}
