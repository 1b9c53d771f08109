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


#include "fractonlab/oracle_suite.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <stdexcept>

#include "fractonlab/exact_oracle.h"

namespace fractonlab {

namespace {

constexpr uint64_t kBatches = 100;
constexpr uint64_t kEquilibriumChainSweeps = 100;

// Histogram plus batch means of a recorded energy series.
class ChainRecorder {
   public:
    ChainRecorder(int64_t coupling_count, uint64_t sweeps) : batch_size_(std::max<uint64_t>(1, sweeps / kBatches)) {
        sample_.histogram.e_min = -coupling_count;
        sample_.histogram.counts.assign(coupling_count + 1, 0);
    }

    void add(int64_t energy) {
        sample_.histogram.add(energy);
        batch_sum_ += (double)energy;
        if (++in_batch_ == batch_size_) {
            batch_means_.push_back(batch_sum_ / (double)batch_size_);
            batch_sum_ = 0;
            in_batch_ = 0;
        }
    }

    ChainSample finish() {
        sample_.mean_energy = sample_.histogram.normalized().mean();
        size_t n = batch_means_.size();
        if (n >= 2) {
            double m = 0;
            for (double b : batch_means_) {
                m += b;
            }
            m /= (double)n;
            double ss = 0;
            for (double b : batch_means_) {
                ss += (b - m) * (b - m);
            }
            sample_.mean_error = std::sqrt(ss / (double)(n - 1) / (double)n);
        }
        return sample_;
    }

   private:
    uint64_t batch_size_;
    uint64_t in_batch_ = 0;
    double batch_sum_ = 0;
    std::vector<double> batch_means_;
    ChainSample sample_;
};

std::string fmt(const char *pattern, double x) {
    char buf[96];
    std::snprintf(buf, sizeof(buf), pattern, x);
    return buf;
}

}  // namespace

ChainSample sample_chain(
    const SpinModel &model,
    double beta,
    uint64_t sweeps,
    const SweepSchedule &schedule,
    uint64_t seed,
    uint64_t burn_in) {
    auto rng = RandomStream::for_purpose(seed, 0, 0, StreamPurpose::kGeneric);
    ReplicaState state = make_replica(model, beta, rng, InitialSpins::kRandom);
    for (uint64_t t = 0; t < burn_in; t++) {
        scheduled_sweep(model, state, schedule);
    }
    ChainRecorder rec((int64_t)model.coupling_count(), sweeps);
    for (uint64_t t = 0; t < sweeps; t++) {
        scheduled_sweep(model, state, schedule);
        rec.add(state.energy);
    }
    if (!energy_cache_coherent(model, state)) {
        throw std::logic_error("Energy cache diverged from a full recount.");
    }
    return rec.finish();
}

ChainSample sample_from_equilibrium(
    const SpinModel &model,
    double beta,
    uint64_t chains,
    uint64_t sweeps_per_chain,
    const SweepSchedule &schedule,
    uint64_t seed) {
    uint32_t n = model.spin_count();
    if (n > kMaxEnumerableSpins) {
        throw std::invalid_argument("Equilibrium starts need an enumerable model.");
    }
    std::vector<int8_t> spins(n);
    auto config_of = [&](uint64_t index) {
        for (uint32_t i = 0; i < n; i++) {
            spins[i] = (int8_t)((index >> i) & 1 ? -1 : 1);
        }
    };
    // Pass 1: minimum energy and the partition sum relative to it.
    uint64_t states = uint64_t{1} << n;
    int64_t e0 = INT64_MAX;
    for (uint64_t x = 0; x < states; x++) {
        config_of(x);
        e0 = std::min(e0, model.energy(spins));
    }
    double z = 0;
    for (uint64_t x = 0; x < states; x++) {
        config_of(x);
        z += std::exp(-beta * (double)(model.energy(spins) - e0));
    }
    // Pass 2: inverse CDF at sorted uniforms.
    auto draw = RandomStream::for_purpose(seed, 0, 0, StreamPurpose::kPilot);
    std::vector<std::pair<double, uint64_t>> targets(chains);
    for (uint64_t c = 0; c < chains; c++) {
        targets[c] = {draw.uniform() * z, c};
    }
    std::sort(targets.begin(), targets.end());
    std::vector<std::vector<int8_t>> starts(chains);
    double cumulative = 0;
    size_t next = 0;
    for (uint64_t x = 0; x < states && next < chains; x++) {
        config_of(x);
        cumulative += std::exp(-beta * (double)(model.energy(spins) - e0));
        while (next < chains && (targets[next].first < cumulative || x + 1 == states)) {
            starts[targets[next++].second] = spins;
        }
    }

    ChainSample sample;
    sample.histogram.e_min = -(int64_t)model.coupling_count();
    sample.histogram.counts.assign(model.coupling_count() + 1, 0);
    std::vector<double> chain_means(chains);
    for (uint64_t c = 0; c < chains; c++) {
        auto rng = RandomStream::for_purpose(seed, 0, c, StreamPurpose::kGeneric);
        ReplicaState state = restore_replica(model, starts[c], beta, rng, 0);
        double sum = 0;
        for (uint64_t t = 0; t < sweeps_per_chain; t++) {
            scheduled_sweep(model, state, schedule);
            sample.histogram.add(state.energy);
            sum += (double)state.energy;
        }
        chain_means[c] = sum / (double)sweeps_per_chain;
        if (!energy_cache_coherent(model, state)) {
            throw std::logic_error("Energy cache diverged from a full recount.");
        }
    }
    sample.mean_energy = sample.histogram.normalized().mean();
    if (chains >= 2) {
        double m = 0, ss = 0;
        for (double x : chain_means) {
            m += x;
        }
        m /= (double)chains;
        for (double x : chain_means) {
            ss += (x - m) * (x - m);
        }
        sample.mean_error = std::sqrt(ss / (double)(chains - 1) / (double)chains);
    }
    return sample;
}

std::vector<ChainSample> sample_tempering(
    const SpinModel &model,
    const TemperatureLadder &ladder,
    uint64_t sweeps,
    uint32_t sweeps_between_swaps,
    const SweepSchedule &schedule,
    uint64_t seed,
    Execution exec) {
    PTState state = make_pt_state(model, ladder, seed, 0);
    PTOptions options;
    options.sweeps_between_swaps = sweeps_between_swaps;
    options.schedule = schedule;
    options.exec = exec;
    for (int k = 0; k < 100; k++) {
        pt_step(model, state, options);
    }
    std::vector<ChainRecorder> recs(ladder.size(), ChainRecorder((int64_t)model.coupling_count(), sweeps));
    SweepObserver observer = [&](uint32_t slot, const ReplicaState &rep) { recs[slot].add(rep.energy); };
    uint64_t steps = (sweeps + sweeps_between_swaps - 1) / sweeps_between_swaps;
    for (uint64_t k = 0; k < steps; k++) {
        pt_step(model, state, options, &observer);
    }
    std::vector<ChainSample> out;
    for (auto &r : recs) {
        out.push_back(r.finish());
    }
    return out;
}

std::vector<OracleCheck> run_oracle_suite(const OracleSuiteOptions &options) {
    if (options.spins > kMaxEnumerableSpins) {
        throw std::invalid_argument(
            "oracle-check instances are limited to " + std::to_string(kMaxEnumerableSpins) + " spins.");
    }
    CouplingHypergraph h = random_hypergraph(options.spins, options.couplings, options.body, options.seed);
    DisorderRealization d = sample_disorder(h, options.p, options.seed);
    SpinModel model(h, d);
    std::vector<OracleCheck> checks;
    auto add = [&](std::string name, double value, double tolerance) {
        checks.push_back(OracleCheck{std::move(name), value <= tolerance, value, tolerance});
    };

    SweepSchedule metropolis{0, options.rule};
    SweepSchedule mixed{1, options.rule};
    const double betas[] = {0.3, nishimori_beta(0.11), 1.5};
    for (size_t k = 0; k < 3; k++) {
        double beta = betas[k];
        ExactSolution exact = enumerate(h, d, beta);
        ChainSample mc = sample_chain(model, beta, options.sweeps, metropolis, options.seed + 1 + k);
        add("metropolis TV at beta=" + fmt("%.4f", beta), total_variation(mc.histogram.normalized(), exact.p_of_e), 0.02);
        add("metropolis <E> z-score at beta=" + fmt("%.4f", beta),
            std::abs(mc.mean_energy - exact.mean_energy) / mc.mean_error, 3.0);
        // Equilibrium starts: single chains trap in metastable basins at low
        // temperature for ~1e5 sweeps, which says nothing about the kernel.
        uint64_t per_chain = std::min<uint64_t>(options.sweeps, kEquilibriumChainSweeps);
        ChainSample mix = sample_from_equilibrium(model, beta, std::max<uint64_t>(1, options.sweeps / per_chain),
                                                  per_chain, mixed, options.seed + 11 + k);
        add("mixed-schedule stationarity TV at beta=" + fmt("%.4f", beta),
            total_variation(mix.histogram.normalized(), exact.p_of_e), 0.02);
    }

    TemperatureLadder ladder = build_ladder(0.3, 1.5, 4, LadderScheme::kGeometric);
    auto slots = sample_tempering(model, ladder, options.sweeps, 10, mixed, options.seed + 21);
    for (size_t s = 0; s < ladder.size(); s++) {
        ExactSolution exact = enumerate(h, d, ladder.betas[s]);
        add("tempering slot TV at beta=" + fmt("%.4f", ladder.betas[s]),
            total_variation(slots[s].histogram.normalized(), exact.p_of_e), 0.02);
    }

    ExactSolution at = enumerate(h, d, 0.8);
    ExactSolution from = enumerate(h, d, 0.85);
    NormalizedHistogram closed = reweight_distribution(from.p_of_e, 0.85, 0.8);
    double max_diff = 0;
    for (size_t b = 0; b < closed.probability.size(); b++) {
        max_diff = std::max(max_diff, std::abs(closed.probability[b] - at.p_of_e.probability[b]));
    }
    add("exact reweighting closure 0.85->0.8 (max |dP|)", max_diff, 1e-10);

    ChainSample base = sample_chain(model, 0.8, options.sweeps, metropolis, options.seed + 31);
    for (double target : {0.75, 0.85}) {
        ChainSample direct = sample_chain(model, target, options.sweeps, metropolis, options.seed + 41 + (target > 0.8));
        ReweightResult rw = reweight_histogram(base.histogram, 0.8, target);
        add("MC reweighting 0.8->" + fmt("%.2f", target) + " TV vs direct MC",
            total_variation(rw.histogram, direct.histogram.normalized()), 0.03);
    }
    return checks;
}

}  // namespace fractonlab
