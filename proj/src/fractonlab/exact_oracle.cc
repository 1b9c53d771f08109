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

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "fractonlab/mc_core.h"

namespace fractonlab {

namespace {

void check_size(const CouplingHypergraph &h, const DisorderRealization &d) {
    if (h.spin_count > kMaxEnumerableSpins) {
        throw std::invalid_argument(
            "Exact enumeration is limited to " + std::to_string(kMaxEnumerableSpins) + " spins (got " +
            std::to_string(h.spin_count) + ").");
    }
    if (d.eta.size() != h.coupling_count()) {
        throw std::invalid_argument("Disorder length does not match the hypergraph.");
    }
}

// Configuration whose spin i is -1 iff bit i of `bits` is set.
std::vector<int8_t> spins_from_bits(uint64_t bits, uint32_t n) {
    std::vector<int8_t> s(n);
    for (uint32_t i = 0; i < n; i++) {
        s[i] = ((bits >> i) & 1) ? -1 : +1;
    }
    return s;
}

// Walks the 2^low states of one stripe in Gray-code order, calling visit(state)
// after each single-spin update. The high bits stay fixed at `stripe`.
template <typename Visit>
void walk_stripe(const SpinModel &model, uint32_t low_bits, uint64_t stripe, Visit &&visit) {
    uint32_t n = model.spin_count();
    ReplicaState state = restore_replica(model, spins_from_bits(stripe << low_bits, n), 0, RandomStream(), 0);
    visit(state);
    uint64_t count = uint64_t{1} << low_bits;
    for (uint64_t i = 1; i < count; i++) {
        auto bit = (uint32_t)__builtin_ctzll(i);
        flip_spin(model, state, bit);
        visit(state);
    }
}

}  // namespace

EnergyHistogram density_of_states(const CouplingHypergraph &h, const DisorderRealization &d, Execution exec) {
    check_size(h, d);
    SpinModel model(h, d);
    auto nc = (int64_t)h.coupling_count();
    uint32_t n = h.spin_count;
    uint32_t stripe_bits = std::min<uint32_t>(n, 6);
    uint32_t low_bits = n - stripe_bits;
    auto stripes = (int64_t)(uint64_t{1} << stripe_bits);
    std::vector<std::vector<uint64_t>> partial(stripes, std::vector<uint64_t>(nc + 1, 0));

    auto run = [&](int64_t j) {
        auto &counts = partial[j];
        walk_stripe(model, low_bits, (uint64_t)j, [&](const ReplicaState &s) { counts[(s.energy + nc) / 2]++; });
    };
    if (exec == Execution::kParallel) {
#pragma omp parallel for schedule(dynamic)
        for (int64_t j = 0; j < stripes; j++) {
            run(j);
        }
    } else {
        for (int64_t j = 0; j < stripes; j++) {
            run(j);
        }
    }

    EnergyHistogram dos;
    dos.e_min = -nc;
    dos.bin_width = 2;
    dos.counts.assign(nc + 1, 0);
    for (const auto &p : partial) {
        for (size_t b = 0; b < p.size(); b++) {
            dos.counts[b] += p[b];
        }
    }
    dos.total = uint64_t{1} << n;
    return dos;
}

ExactSolution solve_from_dos(const EnergyHistogram &dos, double beta) {
    ExactSolution sol;
    sol.beta = beta;
    double max_log = -std::numeric_limits<double>::infinity();
    std::vector<double> logw(dos.counts.size(), -std::numeric_limits<double>::infinity());
    for (size_t b = 0; b < dos.counts.size(); b++) {
        if (dos.counts[b]) {
            logw[b] = std::log((double)dos.counts[b]) - beta * (double)dos.energy_of(b);
            max_log = std::max(max_log, logw[b]);
        }
    }
    double sum = 0;
    for (double lw : logw) {
        if (std::isfinite(lw)) {
            sum += std::exp(lw - max_log);
        }
    }
    sol.log_z = max_log + std::log(sum);
    sol.p_of_e.e_min = dos.e_min;
    sol.p_of_e.bin_width = dos.bin_width;
    sol.p_of_e.probability.assign(dos.counts.size(), 0);
    for (size_t b = 0; b < dos.counts.size(); b++) {
        if (std::isfinite(logw[b])) {
            sol.p_of_e.probability[b] = std::exp(logw[b] - sol.log_z);
        }
    }
    sol.mean_energy = sol.p_of_e.mean();
    sol.mean_energy_sq = sol.p_of_e.mean_sq();
    return sol;
}

ExactSolution enumerate(
    const CouplingHypergraph &h, const DisorderRealization &d, double beta, bool with_correlator, Execution exec) {
    ExactSolution sol = solve_from_dos(density_of_states(h, d, exec), beta);
    if (with_correlator && h.geometry == Geometry::kCheckerboardFcc) {
        SpinModel model(h, d);
        CorrelatorPlan plan(h);
        std::vector<double> acc(plan.lattice_size(), 0);
        // Weights relative to Z; serial so the summation order is fixed.
        walk_stripe(model, h.spin_count, 0, [&](const ReplicaState &s) {
            double w = std::exp(-beta * (double)s.energy - sol.log_z);
            auto g = plan.sample(s.spins);
            for (size_t r = 0; r < g.size(); r++) {
                acc[r] += w * g[r];
            }
        });
        sol.correlator = std::move(acc);
    }
    return sol;
}

double log_partition(const CouplingHypergraph &h, const DisorderRealization &d, double beta) {
    return solve_from_dos(density_of_states(h, d), beta).log_z;
}

double delta_f(
    const CouplingHypergraph &h, const DisorderRealization &d, std::span<const uint32_t> flip_set, double beta) {
    if (beta == 0) {
        return 0;
    }
    DisorderRealization flipped = flip_couplings(d, flip_set);
    return (log_partition(h, d, beta) - log_partition(h, flipped, beta)) / beta;
}

uint64_t exact_gsd_count(const CouplingHypergraph &h, const DisorderRealization &d) {
    EnergyHistogram dos = density_of_states(h, d);
    for (uint64_t c : dos.counts) {
        if (c) {
            return c;
        }
    }
    throw std::logic_error("Density of states is empty.");
}

}  // namespace fractonlab
