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

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <string>

namespace fractonlab {

using nlohmann::json;

namespace {

constexpr int kFormatVersion = 1;

void require(bool ok, const std::string &field, const std::string &what) {
    if (!ok) {
        throw std::invalid_argument("Config field '" + field + "': " + what);
    }
}

std::string_view rule_name(AcceptanceRule rule) {
    return rule == AcceptanceRule::kMetropolis ? "metropolis" : "corrupted";
}

AcceptanceRule parse_rule(std::string_view text) {
    if (text == "metropolis") {
        return AcceptanceRule::kMetropolis;
    }
    if (text == "corrupted") {
        return AcceptanceRule::kCorruptedForTesting;
    }
    throw std::invalid_argument("Unknown acceptance rule '" + std::string(text) + "'.");
}

json rng_to_json(const RandomStream &rng) {
    const auto &s = rng.state();
    return json::array({s.key, s.stream, s.counter, s.lane, s.buffer[0], s.buffer[1], s.buffer[2], s.buffer[3]});
}

RandomStream rng_from_json(const json &j) {
    RandomStream::State s;
    s.key = j.at(0).get<uint64_t>();
    s.stream = j.at(1).get<uint64_t>();
    s.counter = j.at(2).get<uint64_t>();
    s.lane = j.at(3).get<uint32_t>();
    for (size_t k = 0; k < 4; k++) {
        s.buffer[k] = j.at(4 + k).get<uint32_t>();
    }
    RandomStream rng;
    rng.set_state(s);
    return rng;
}

json histogram_to_json(const EnergyHistogram &h) {
    return json{{"e_min", h.e_min}, {"bin_width", h.bin_width}, {"total", h.total}, {"counts", h.counts}};
}

EnergyHistogram histogram_from_json(const json &j) {
    EnergyHistogram h;
    h.e_min = j.at("e_min").get<int64_t>();
    h.bin_width = j.at("bin_width").get<int64_t>();
    h.total = j.at("total").get<uint64_t>();
    h.counts = j.at("counts").get<std::vector<uint64_t>>();
    return h;
}

json series_to_json(const LogBinAccumulator &acc) {
    json bins = json::array();
    for (const auto &b : acc.raw_bins()) {
        bins.push_back(json::array({b.tau, b.count, b.mean, b.m2, b.complete}));
    }
    return json{{"length", acc.length()}, {"bins", bins}};
}

LogBinAccumulator series_from_json(const json &j) {
    std::vector<BinnedSeries::Bin> bins;
    for (const auto &row : j.at("bins")) {
        BinnedSeries::Bin b;
        b.tau = row.at(0).get<int>();
        b.count = row.at(1).get<uint64_t>();
        b.mean = row.at(2).get<double>();
        b.m2 = row.at(3).get<double>();
        b.complete = row.at(4).get<bool>();
        bins.push_back(b);
    }
    return LogBinAccumulator::from_bins(j.at("length").get<uint64_t>(), std::move(bins));
}

json equilibration_to_json(const EquilibrationResult &e) {
    return json{{"equilibrated", e.equilibrated}, {"tau_first", e.tau_first}, {"diagnostic", e.diagnostic}};
}

EquilibrationResult equilibration_from_json(const json &j) {
    EquilibrationResult e;
    e.equilibrated = j.at("equilibrated").get<bool>();
    e.tau_first = j.at("tau_first").get<int>();
    e.diagnostic = j.at("diagnostic").get<std::string>();
    return e;
}

json slot_to_json(const SlotStats &s) {
    json j{{"beta", s.beta}, {"histogram", histogram_to_json(s.histogram)}, {"energy_series", series_to_json(s.energy_series)}};
    if (s.correlator) {
        j["correlator"] = json{
            {"count", s.correlator->count()}, {"sum", s.correlator->sums()}, {"sum_sq", s.correlator->sums_sq()}};
    }
    return j;
}

SlotStats slot_from_json(const json &j, int lattice_size) {
    SlotStats s;
    s.beta = j.at("beta").get<double>();
    s.histogram = histogram_from_json(j.at("histogram"));
    s.energy_series = series_from_json(j.at("energy_series"));
    if (j.contains("correlator")) {
        const auto &c = j.at("correlator");
        s.correlator = CorrelatorAccumulator::from_sums(
            lattice_size,
            c.at("count").get<uint64_t>(),
            c.at("sum").get<std::vector<double>>(),
            c.at("sum_sq").get<std::vector<double>>());
    }
    return s;
}

std::string spins_to_string(const std::vector<int8_t> &spins) {
    std::string s(spins.size(), '+');
    for (size_t i = 0; i < spins.size(); i++) {
        if (spins[i] < 0) {
            s[i] = '-';
        }
    }
    return s;
}

std::vector<int8_t> spins_from_string(const std::string &s) {
    std::vector<int8_t> spins(s.size());
    for (size_t i = 0; i < s.size(); i++) {
        if (s[i] != '+' && s[i] != '-') {
            throw std::invalid_argument("Saved spin configuration contains a character other than '+' or '-'.");
        }
        spins[i] = s[i] == '+' ? +1 : -1;
    }
    return spins;
}

json geometry_json(const CouplingHypergraph &h) {
    return json{
        {"spins", h.spin_count}, {"couplings", h.coupling_count()}, {"lattice_size", h.lattice_size}};
}

}  // namespace

void EnsembleConfig::validate() const {
    require(lattice_size >= 2, "L", "must be >= 2");
    if (code == CodeKind::kCheckerboard) {
        require(lattice_size % 2 == 0, "L", "the checkerboard code needs an even L");
    }
    require(p >= 0 && p <= 1, "p", "must lie in [0, 1]");
    require(realizations >= 2, "N_d", "need at least 2 realizations for jackknife errors");
    require(tau >= 3 && tau <= 40, "tau", "must lie in [3, 40] (the equilibration check needs 2^tau >= 8)");
    if (betas.empty()) {
        require(temperatures >= 2, "N_T", "need at least 2 temperatures");
        require(beta_min > 0, "beta_min", "must be > 0");
        require(beta_max > beta_min, "beta_max", "must exceed beta_min");
    } else {
        require(betas.size() >= 2, "betas", "need at least 2 temperatures");
        make_ladder(betas);
    }
    require(
        min_equilibrated_fraction >= 0 && min_equilibrated_fraction <= 1, "min_equilibrated_fraction",
        "must lie in [0, 1]");
    require(microcanonical_per_metropolis <= 64, "microcanonical_per_metropolis", "must be <= 64");
}

json EnsembleConfig::to_json() const {
    return json{
        {"code", code_kind_name(code)},
        {"sector", pauli_type_name(sector)},
        {"L", lattice_size},
        {"p", p},
        {"N_d", realizations},
        {"N_T", temperatures},
        {"tau", tau},
        {"beta_min", beta_min},
        {"beta_max", beta_max},
        {"ladder", ladder_scheme_name(ladder_scheme)},
        {"betas", betas},
        {"tune_ladder", tune_ladder},
        {"swap_cadence", swap_cadence},
        {"microcanonical_per_metropolis", microcanonical_per_metropolis},
        {"seed", seed},
        {"min_equilibrated_fraction", min_equilibrated_fraction},
        {"acceptance_rule", rule_name(acceptance_rule)},
    };
}

EnsembleConfig EnsembleConfig::from_json(const json &j) {
    EnsembleConfig c;
    c.code = parse_code_kind(j.at("code").get<std::string>());
    c.sector = parse_pauli_type(j.at("sector").get<std::string>());
    c.lattice_size = j.at("L").get<int>();
    c.p = j.at("p").get<double>();
    c.realizations = j.at("N_d").get<uint32_t>();
    c.temperatures = j.at("N_T").get<uint32_t>();
    c.tau = j.at("tau").get<int>();
    c.beta_min = j.at("beta_min").get<double>();
    c.beta_max = j.at("beta_max").get<double>();
    c.ladder_scheme = parse_ladder_scheme(j.at("ladder").get<std::string>());
    c.betas = j.at("betas").get<std::vector<double>>();
    c.tune_ladder = j.at("tune_ladder").get<bool>();
    c.swap_cadence = j.at("swap_cadence").get<uint32_t>();
    c.microcanonical_per_metropolis = j.at("microcanonical_per_metropolis").get<uint32_t>();
    c.seed = j.at("seed").get<uint64_t>();
    c.min_equilibrated_fraction = j.at("min_equilibrated_fraction").get<double>();
    c.acceptance_rule = parse_rule(j.at("acceptance_rule").get<std::string>());
    return c;
}

CouplingHypergraph ensemble_hypergraph(const EnsembleConfig &config) {
    StabilizerCode code = config.code == CodeKind::kCheckerboard ? build_checkerboard(config.lattice_size)
                                                                 : build_haah(config.lattice_size);
    return map_error_model(code, config.sector);
}

TemperatureLadder configured_ladder(const EnsembleConfig &config) {
    if (!config.betas.empty()) {
        return make_ladder(config.betas);
    }
    return build_ladder(config.beta_min, config.beta_max, config.temperatures, config.ladder_scheme);
}

LadderChoice choose_ladder(const EnsembleConfig &config, const CouplingHypergraph &h, Execution exec) {
    LadderChoice choice{configured_ladder(config), false, true};
    if (!config.tune_ladder || choice.ladder.size() < 3) {
        return choice;
    }
    SpinModel model(h, sample_disorder(h, config.p, config.seed, 0));
    TuneOptions options;
    options.sweeps_between_swaps = config.swap_cadence ? config.swap_cadence : 10;
    options.schedule = config.schedule();
    options.seed = config.seed;
    options.exec = exec;
    TuneResult tuned = tune_ladder(model, choice.ladder, options);
    choice.ladder = tuned.ladder;
    choice.tuned = true;
    choice.tuning_converged = tuned.converged;
    return choice;
}

bool RealizationBundle::operator==(const RealizationBundle &other) const {
    return bundle_to_json(*this) == bundle_to_json(other);
}

json bundle_to_json(const RealizationBundle &b) {
    json slots = json::array();
    json slot_eq = json::array();
    for (const auto &s : b.slots) {
        slots.push_back(slot_to_json(s));
    }
    for (const auto &e : b.slot_equilibration) {
        slot_eq.push_back(equilibration_to_json(e));
    }
    return json{
        {"realization", b.realization},
        {"spins", b.spin_count},
        {"couplings", b.coupling_count},
        {"lattice_size", b.lattice_size},
        {"negative_couplings", b.negative_couplings},
        {"sweeps", b.sweeps},
        {"slots", slots},
        {"total_energy_series", series_to_json(b.total_energy_series)},
        {"equilibration", equilibration_to_json(b.equilibration)},
        {"slot_equilibration", slot_eq},
        {"swaps_proposed", b.swaps_proposed},
        {"swaps_accepted", b.swaps_accepted},
        {"roundtrips", b.roundtrips},
    };
}

RealizationBundle bundle_from_json(const json &j) {
    RealizationBundle b;
    b.realization = j.at("realization").get<uint32_t>();
    b.spin_count = j.at("spins").get<uint32_t>();
    b.coupling_count = j.at("couplings").get<uint32_t>();
    b.lattice_size = j.at("lattice_size").get<int>();
    b.negative_couplings = j.at("negative_couplings").get<uint32_t>();
    b.sweeps = j.at("sweeps").get<uint64_t>();
    for (const auto &s : j.at("slots")) {
        b.slots.push_back(slot_from_json(s, b.lattice_size));
    }
    b.total_energy_series = series_from_json(j.at("total_energy_series"));
    b.equilibration = equilibration_from_json(j.at("equilibration"));
    for (const auto &e : j.at("slot_equilibration")) {
        b.slot_equilibration.push_back(equilibration_from_json(e));
    }
    b.swaps_proposed = j.at("swaps_proposed").get<std::vector<uint64_t>>();
    b.swaps_accepted = j.at("swaps_accepted").get<std::vector<uint64_t>>();
    b.roundtrips = j.at("roundtrips").get<std::vector<uint64_t>>();
    return b;
}

RealizationRunner::RealizationRunner(
    const EnsembleConfig &config, const CouplingHypergraph &h, const TemperatureLadder &ladder, uint32_t realization)
    : config_(config),
      realization_(realization),
      model_(h, sample_disorder(h, config.p, config.seed, realization)) {
    if (h.geometry == Geometry::kCheckerboardFcc) {
        plan_.emplace(h);
    }
    state_ = make_pt_state(model_, ladder, config.seed, realization);
    auto nc = (int64_t)h.coupling_count();
    for (double beta : ladder.betas) {
        SlotStats s;
        s.beta = beta;
        s.histogram.e_min = -nc;
        s.histogram.bin_width = 2;
        s.histogram.counts.assign(nc + 1, 0);
        if (plan_) {
            s.correlator = CorrelatorAccumulator(plan_->lattice_size());
        }
        slots_.push_back(std::move(s));
    }
    std::vector<int64_t> initial(ladder.size());
    for (size_t slot = 0; slot < ladder.size(); slot++) {
        initial[slot] = state_.replicas[state_.replica_at_slot[slot]].energy;
    }
    record_series(initial);
}

void RealizationRunner::record_series(std::span<const int64_t> slot_energies) {
    int64_t total = 0;
    for (size_t slot = 0; slot < slot_energies.size(); slot++) {
        slots_[slot].energy_series.add((double)slot_energies[slot]);
        total += slot_energies[slot];
    }
    total_series_.add((double)total);
}

void RealizationRunner::advance(uint64_t max_sweeps, Execution exec, const std::atomic<bool> *stop) {
    uint64_t total = total_sweeps();
    uint64_t target = max_sweeps >= total - sweeps_done_ ? total : sweeps_done_ + max_sweeps;
    uint64_t therm = config_.thermalization_sweeps();
    uint32_t cadence = config_.swap_cadence;
    size_t n_slots = slots_.size();
    SweepSchedule schedule = config_.schedule();
    std::vector<int64_t> buffer;
    while (sweeps_done_ < target) {
        if (stop != nullptr && stop->load()) {
            break;
        }
        uint64_t next = target;
        if (cadence > 0) {
            next = std::min(next, (sweeps_done_ / cadence + 1) * cadence);
        }
        if (sweeps_done_ < therm) {
            next = std::min(next, therm);
        }
        uint64_t start = sweeps_done_;
        auto chunk = (uint32_t)(next - start);
        bool sampling = start >= therm;
        buffer.assign((size_t)chunk * n_slots, 0);
        SweepObserver observer = [&](uint32_t slot, const ReplicaState &rep) {
            buffer[(rep.sweep_count - start - 1) * n_slots + slot] = rep.energy;
            if (sampling) {
                SlotStats &s = slots_[slot];
                s.histogram.add(rep.energy);
                if (plan_) {
                    s.correlator->add(plan_->sample(rep.spins));
                }
            }
        };
        advance_replicas(model_, state_, chunk, schedule, exec, &observer);
        for (uint32_t k = 0; k < chunk; k++) {
            record_series(std::span<const int64_t>(buffer.data() + (size_t)k * n_slots, n_slots));
        }
        sweeps_done_ = next;
        if (cadence > 0 && sweeps_done_ % cadence == 0) {
            swap_pass(model_, state_);
        }
    }
}

RealizationBundle RealizationRunner::bundle() const {
    for (const auto &rep : state_.replicas) {
        if (!energy_cache_coherent(model_, rep)) {
            throw std::logic_error("Cached replica energy diverged from a full recount.");
        }
    }
    RealizationBundle b;
    const auto &h = model_.hypergraph();
    b.realization = realization_;
    b.spin_count = h.spin_count;
    b.coupling_count = (uint32_t)h.coupling_count();
    b.lattice_size = h.lattice_size;
    for (int8_t e : model_.disorder().eta) {
        b.negative_couplings += e < 0;
    }
    b.sweeps = sweeps_done_;
    b.slots = slots_;
    b.total_energy_series = total_series_;
    b.equilibration = equilibration_check(total_series_.binned());
    for (const auto &s : slots_) {
        b.slot_equilibration.push_back(equilibration_check(s.energy_series.binned()));
    }
    b.swaps_proposed = state_.swaps_proposed;
    b.swaps_accepted = state_.swaps_accepted;
    b.roundtrips = state_.roundtrips;
    return b;
}

json RealizationRunner::save() const {
    json replicas = json::array();
    for (const auto &rep : state_.replicas) {
        replicas.push_back(json{
            {"spins", spins_to_string(rep.spins)}, {"rng", rng_to_json(rep.rng)}, {"sweep_count", rep.sweep_count}});
    }
    json slots = json::array();
    for (const auto &s : slots_) {
        slots.push_back(slot_to_json(s));
    }
    return json{
        {"realization", realization_},
        {"geometry", geometry_json(model_.hypergraph())},
        {"ladder", state_.ladder.betas},
        {"sweeps_done", sweeps_done_},
        {"replicas", replicas},
        {"slot_of_replica", state_.slot_of_replica},
        {"swaps_proposed", state_.swaps_proposed},
        {"swaps_accepted", state_.swaps_accepted},
        {"roundtrips", state_.roundtrips},
        {"trip_phase", state_.trip_phase},
        {"swap_passes", state_.swap_passes},
        {"swap_rng", rng_to_json(state_.swap_rng)},
        {"slots", slots},
        {"total_series", series_to_json(total_series_)},
    };
}

RealizationRunner RealizationRunner::load(
    const EnsembleConfig &config, const CouplingHypergraph &h, const TemperatureLadder &ladder, const json &j) {
    if (j.at("geometry") != geometry_json(h)) {
        throw std::invalid_argument("Saved realization belongs to a different lattice geometry.");
    }
    if (j.at("ladder").get<std::vector<double>>() != ladder.betas) {
        throw std::invalid_argument("Saved realization used a different temperature ladder.");
    }
    RealizationRunner runner(config, h, ladder, j.at("realization").get<uint32_t>());
    PTState &st = runner.state_;
    size_t n = ladder.size();
    st.slot_of_replica = j.at("slot_of_replica").get<std::vector<uint32_t>>();
    if (st.slot_of_replica.size() != n || j.at("replicas").size() != n) {
        throw std::invalid_argument("Saved realization has the wrong number of replicas.");
    }
    std::vector<bool> seen(n, false);
    for (size_t r = 0; r < n; r++) {
        uint32_t slot = st.slot_of_replica[r];
        if (slot >= n || seen[slot]) {
            throw std::invalid_argument("Saved replica permutation is not a bijection.");
        }
        seen[slot] = true;
        st.replica_at_slot[slot] = (uint32_t)r;
        const auto &rj = j.at("replicas").at(r);
        auto spins = spins_from_string(rj.at("spins").get<std::string>());
        if (spins.size() != h.spin_count) {
            throw std::invalid_argument("Saved replica has the wrong number of spins.");
        }
        st.replicas[r] = restore_replica(
            runner.model_, std::move(spins), ladder.betas[slot], rng_from_json(rj.at("rng")),
            rj.at("sweep_count").get<uint64_t>());
    }
    st.swaps_proposed = j.at("swaps_proposed").get<std::vector<uint64_t>>();
    st.swaps_accepted = j.at("swaps_accepted").get<std::vector<uint64_t>>();
    st.roundtrips = j.at("roundtrips").get<std::vector<uint64_t>>();
    st.trip_phase = j.at("trip_phase").get<std::vector<uint8_t>>();
    st.swap_passes = j.at("swap_passes").get<uint64_t>();
    st.swap_rng = rng_from_json(j.at("swap_rng"));
    runner.sweeps_done_ = j.at("sweeps_done").get<uint64_t>();
    runner.slots_.clear();
    for (const auto &s : j.at("slots")) {
        runner.slots_.push_back(slot_from_json(s, h.lattice_size));
    }
    runner.total_series_ = series_from_json(j.at("total_series"));
    return runner;
}

RealizationBundle run_realization(
    const EnsembleConfig &config,
    const CouplingHypergraph &h,
    const TemperatureLadder &ladder,
    uint32_t realization,
    Execution exec) {
    RealizationRunner runner(config, h, ladder, realization);
    runner.advance(runner.total_sweeps(), exec);
    return runner.bundle();
}

JackknifeEstimate jackknife(size_t n, const std::function<double(size_t excluded)> &statistic) {
    if (n < 2) {
        throw std::invalid_argument("The jackknife needs at least 2 samples.");
    }
    double full = statistic(n);
    std::vector<double> loo(n);
    double mean = 0;
    for (size_t k = 0; k < n; k++) {
        loo[k] = statistic(k);
        mean += loo[k];
    }
    mean /= (double)n;
    double ss = 0;
    for (double t : loo) {
        ss += (t - mean) * (t - mean);
    }
    double dn = (double)n;
    return JackknifeEstimate{dn * full - (dn - 1) * mean, std::sqrt((dn - 1) / dn * ss), n};
}

JackknifeEstimate jackknife_mean(std::span<const double> values) {
    double total = 0;
    for (double v : values) {
        total += v;
    }
    size_t n = values.size();
    return jackknife(n, [&](size_t k) {
        if (k == n) {
            return total / (double)n;
        }
        return (total - values[k]) / (double)(n - 1);
    });
}

JackknifeEstimate jackknife_ratio(std::span<const double> numerators, std::span<const double> denominators) {
    if (numerators.size() != denominators.size()) {
        throw std::invalid_argument("Ratio jackknife needs as many denominators as numerators.");
    }
    size_t n = numerators.size();
    return jackknife(n, [&](size_t k) {
        double num = 0;
        double den = 0;
        for (size_t i = 0; i < n; i++) {
            if (i != k) {
                num += numerators[i];
                den += denominators[i];
            }
        }
        return num / den;
    });
}

SlotMoments slot_moments(const SlotStats &slot, uint32_t spin_count, uint32_t coupling_count) {
    const EnergyHistogram &h = slot.histogram;
    if (h.total == 0) {
        throw std::invalid_argument("Slot has no samples.");
    }
    double total = (double)h.total;
    double mean = 0;
    for (size_t b = 0; b < h.counts.size(); b++) {
        mean += (double)h.counts[b] * (double)h.energy_of(b);
    }
    mean /= total;
    double var = 0;
    double sq = 0;
    for (size_t b = 0; b < h.counts.size(); b++) {
        double e = (double)h.energy_of(b);
        var += (double)h.counts[b] * (e - mean) * (e - mean);
        sq += (double)h.counts[b] * e * e;
    }
    var /= total;
    sq /= total;
    double n = (double)spin_count;
    double nc = (double)coupling_count;
    SlotMoments m;
    m.energy = mean;
    m.energy_sq = sq;
    m.specific_heat = slot.beta * slot.beta * var / n;
    m.order_parameter = -mean / nc;
    m.susceptibility = slot.beta * n * var / (nc * nc);
    return m;
}

EnsembleResult aggregate(const EnsembleConfig &config, std::span<const RealizationBundle> bundles) {
    EnsembleResult result;
    result.code = config.code;
    result.sector = config.sector;
    result.lattice_size = config.lattice_size;
    result.p = config.p;
    result.realizations = (uint32_t)bundles.size();

    std::vector<const RealizationBundle *> used;
    for (const auto &b : bundles) {
        if (b.equilibration.equilibrated) {
            used.push_back(&b);
        } else {
            result.excluded.push_back(b.realization);
        }
    }
    result.effective_realizations = (uint32_t)used.size();
    if (used.size() < 2) {
        throw std::runtime_error(
            "Only " + std::to_string(used.size()) + " of " + std::to_string(bundles.size()) +
            " realizations passed the equilibration check; at least 2 are needed.");
    }
    size_t n_slots = used[0]->slots.size();
    for (const auto *b : used) {
        if (b->slots.size() != n_slots || b->spin_count != used[0]->spin_count) {
            throw std::invalid_argument("Bundles come from different ensembles.");
        }
    }

    size_t n = used.size();
    for (size_t s = 0; s < n_slots; s++) {
        BetaRecord rec;
        rec.beta = used[0]->slots[s].beta;
        std::vector<double> e(n), cv(n), o(n), chi(n);
        for (size_t i = 0; i < n; i++) {
            const auto &b = *used[i];
            if (b.slots[s].beta != rec.beta) {
                throw std::invalid_argument("Bundles were simulated on different ladders.");
            }
            SlotMoments m = slot_moments(b.slots[s], b.spin_count, b.coupling_count);
            e[i] = m.energy;
            cv[i] = m.specific_heat;
            o[i] = m.order_parameter;
            chi[i] = m.susceptibility;
        }
        rec.energy = jackknife_mean(e);
        rec.specific_heat = jackknife_mean(cv);
        rec.order_parameter = jackknife_mean(o);
        rec.susceptibility = jackknife_mean(chi);

        NormalizedHistogram avg = used[0]->slots[s].histogram.normalized();
        std::fill(avg.probability.begin(), avg.probability.end(), 0.0);
        for (const auto *b : used) {
            NormalizedHistogram p = b->slots[s].histogram.normalized();
            if (p.probability.size() != avg.probability.size() || p.e_min != avg.e_min) {
                throw std::invalid_argument("Bundle histograms live on different grids.");
            }
            for (size_t k = 0; k < p.probability.size(); k++) {
                avg.probability[k] += p.probability[k];
            }
        }
        for (double &v : avg.probability) {
            v /= (double)n;
        }
        rec.histogram = std::move(avg);

        if (used[0]->slots[s].correlator) {
            int L = used[0]->lattice_size;
            std::vector<std::vector<double>> g(n);
            std::vector<double> sum(L, 0);
            for (size_t i = 0; i < n; i++) {
                g[i] = used[i]->slots[s].correlator->profile().g;
                for (int r = 0; r < L; r++) {
                    sum[r] += g[i][r];
                }
            }
            auto mean_without = [&](size_t k) {
                std::vector<double> m(L);
                double count = k == n ? (double)n : (double)(n - 1);
                for (int r = 0; r < L; r++) {
                    m[r] = (sum[r] - (k == n ? 0.0 : g[k][r])) / count;
                }
                return m;
            };
            CorrelatorProfile profile;
            profile.lattice_size = L;
            profile.g = mean_without(n);
            for (int r = 0; r < L; r++) {
                std::vector<double> column(n);
                for (size_t i = 0; i < n; i++) {
                    column[i] = g[i][r];
                }
                profile.error.push_back(jackknife_mean(column).error);
            }
            rec.correlator = profile;
            bool defined = true;
            JackknifeEstimate xi = jackknife(n, [&](size_t k) {
                auto v = xi_second_moment(mean_without(k));
                if (!v) {
                    defined = false;
                    return 0.0;
                }
                return *v;
            });
            if (defined) {
                rec.xi = xi;
            }
        }
        result.records.push_back(std::move(rec));
    }
    return result;
}

EnsembleProgress start_ensemble(const EnsembleConfig &config, Execution exec) {
    config.validate();
    CouplingHypergraph h = ensemble_hypergraph(config);
    LadderChoice choice = choose_ladder(config, h, exec);
    EnsembleProgress progress;
    progress.ladder = choice.ladder;
    progress.ladder_tuned = choice.tuned;
    progress.tuning_converged = choice.tuning_converged;
    return progress;
}

bool run_ensemble(const EnsembleConfig &config, EnsembleProgress &progress, const RunControl &control) {
    CouplingHypergraph h = ensemble_hypergraph(config);
    std::vector<uint32_t> pending;
    for (uint32_t i = 0; i < config.realizations; i++) {
        if (!progress.completed.count(i)) {
            pending.push_back(i);
        }
    }
    uint64_t budget = control.sweep_budget ? control.sweep_budget : std::numeric_limits<uint64_t>::max();
    std::mutex mu;
    std::exception_ptr failure;

    auto work = [&](uint32_t idx, Execution inner) {
        std::optional<json> saved;
        {
            std::lock_guard<std::mutex> lock(mu);
            auto it = progress.partial.find(idx);
            if (it != progress.partial.end()) {
                saved = it->second;
            }
        }
        if (!saved && control.stop != nullptr && control.stop->load()) {
            return;
        }
        RealizationRunner runner = saved ? RealizationRunner::load(config, h, progress.ladder, *saved)
                                         : RealizationRunner(config, h, progress.ladder, idx);
        runner.advance(budget, inner, control.stop);
        std::lock_guard<std::mutex> lock(mu);
        if (runner.finished()) {
            RealizationBundle b = runner.bundle();
            progress.partial.erase(idx);
            if (control.on_complete) {
                control.on_complete(b);
            }
            progress.completed.emplace(idx, std::move(b));
        } else {
            progress.partial[idx] = runner.save();
        }
    };
    auto guarded = [&](uint32_t idx, Execution inner) {
        try {
            work(idx, inner);
        } catch (...) {
            std::lock_guard<std::mutex> lock(mu);
            if (!failure) {
                failure = std::current_exception();
            }
        }
    };

    auto count = (int64_t)pending.size();
    if (control.exec == Execution::kParallel) {
#pragma omp parallel for schedule(dynamic, 1)
        for (int64_t k = 0; k < count; k++) {
            guarded(pending[k], Execution::kSerial);
        }
    } else {
        for (int64_t k = 0; k < count; k++) {
            guarded(pending[k], Execution::kSerial);
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
    return progress.complete(config);
}

json checkpoint_to_json(const EnsembleConfig &config, const EnsembleProgress &progress) {
    CouplingHypergraph h = ensemble_hypergraph(config);
    json completed = json::array();
    for (const auto &[idx, b] : progress.completed) {
        completed.push_back(bundle_to_json(b));
    }
    json partial = json::array();
    for (const auto &[idx, p] : progress.partial) {
        partial.push_back(p);
    }
    return json{
        {"magic", kCheckpointMagic},
        {"version", kFormatVersion},
        {"config", config.to_json()},
        {"geometry", geometry_json(h)},
        {"ladder", progress.ladder.betas},
        {"ladder_tuned", progress.ladder_tuned},
        {"tuning_converged", progress.tuning_converged},
        {"completed", completed},
        {"partial", partial},
    };
}

EnsembleProgress checkpoint_from_json(const EnsembleConfig &config, const json &j) {
    if (!j.contains("magic") || j.at("magic") != kCheckpointMagic || j.at("version") != kFormatVersion) {
        throw std::invalid_argument("Not a checkpoint of this format version.");
    }
    json expected = config.to_json();
    const json &saved = j.at("config");
    for (const auto &[key, value] : expected.items()) {
        if (!saved.contains(key) || saved.at(key) != value) {
            throw std::invalid_argument(
                "Checkpoint was written for a different config: field '" + key + "' is " +
                (saved.contains(key) ? saved.at(key).dump() : std::string("missing")) + " in the checkpoint but " +
                value.dump() + " now.");
        }
    }
    CouplingHypergraph h = ensemble_hypergraph(config);
    if (j.at("geometry") != geometry_json(h)) {
        throw std::invalid_argument("Checkpoint geometry does not match the lattice of the config.");
    }
    EnsembleProgress progress;
    progress.ladder = make_ladder(j.at("ladder").get<std::vector<double>>());
    progress.ladder_tuned = j.at("ladder_tuned").get<bool>();
    progress.tuning_converged = j.at("tuning_converged").get<bool>();
    for (const auto &b : j.at("completed")) {
        RealizationBundle bundle = bundle_from_json(b);
        progress.completed.emplace(bundle.realization, std::move(bundle));
    }
    for (const auto &p : j.at("partial")) {
        progress.partial.emplace(p.at("realization").get<uint32_t>(), p);
    }
    return progress;
}

}  // namespace fractonlab
