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


#ifndef _FRACTONLAB_ENSEMBLE_H
#define _FRACTONLAB_ENSEMBLE_H

#include <atomic>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "fractonlab/code_model.h"
#include "fractonlab/mc_core.h"
#include "fractonlab/observables.h"
#include "fractonlab/parallel.h"
#include "fractonlab/sm_map.h"
#include "fractonlab/tempering.h"

namespace fractonlab {

/// One disorder ensemble at fixed (code, L, p): N_d realizations, each
/// simulated by parallel tempering for 2^tau thermalization sweeps followed by
/// 2^tau sampling sweeps.
struct EnsembleConfig {
    CodeKind code = CodeKind::kCheckerboard;
    PauliType sector = PauliType::kX;
    int lattice_size = 4;
    double p = 0;
    uint32_t realizations = 2;
    uint32_t temperatures = 4;
    int tau = 10;
    double beta_min = 0.5;
    double beta_max = 1.0;
    LadderScheme ladder_scheme = LadderScheme::kGeometric;
    /// When set, overrides the (beta_min, beta_max, temperatures, scheme) grid.
    std::vector<double> betas;
    /// Tune the ladder once per ensemble with a pilot run on realization 0.
    bool tune_ladder = false;
    /// Metropolis sweeps between swap passes; 0 disables swaps.
    uint32_t swap_cadence = 10;
    uint32_t microcanonical_per_metropolis = 1;
    uint64_t seed = 0;
    /// Fraction of realizations that must pass the equilibration check.
    double min_equilibrated_fraction = 0.5;
    /// Test hook: replaces the Metropolis acceptance rule.
    AcceptanceRule acceptance_rule = AcceptanceRule::kMetropolis;

    /// Throws std::invalid_argument naming the offending field.
    void validate() const;
    uint64_t thermalization_sweeps() const {
        return uint64_t{1} << tau;
    }
    uint64_t total_sweeps() const {
        return uint64_t{2} << tau;
    }
    SweepSchedule schedule() const {
        return SweepSchedule{microcanonical_per_metropolis, acceptance_rule};
    }
    /// Canonical JSON of every field that affects results.
    nlohmann::json to_json() const;
    static EnsembleConfig from_json(const nlohmann::json &j);
};

CouplingHypergraph ensemble_hypergraph(const EnsembleConfig &config);

/// Untuned ladder of the config: explicit betas or the (beta_min, beta_max) grid.
TemperatureLadder configured_ladder(const EnsembleConfig &config);

/// Ladder used for every realization; tuned on realization 0 when requested.
struct LadderChoice {
    TemperatureLadder ladder;
    bool tuned = false;
    bool tuning_converged = true;
};
LadderChoice choose_ladder(const EnsembleConfig &config, const CouplingHypergraph &h, Execution exec);

/// Sampling-phase statistics of one ladder slot.
struct SlotStats {
    double beta = 0;
    EnergyHistogram histogram;
    /// Present for checkerboard geometry only.
    std::optional<CorrelatorAccumulator> correlator;
    /// Energy at this slot after every sweep, thermalization included.
    LogBinAccumulator energy_series;

    bool operator==(const SlotStats &other) const = default;
};

/// Everything one realization contributes to the ensemble.
struct RealizationBundle {
    uint32_t realization = 0;
    uint32_t spin_count = 0;
    uint32_t coupling_count = 0;
    int lattice_size = 0;
    uint32_t negative_couplings = 0;
    uint64_t sweeps = 0;
    std::vector<SlotStats> slots;
    /// Slot-summed energy after every sweep; invariant under swaps.
    LogBinAccumulator total_energy_series;
    EquilibrationResult equilibration;
    std::vector<EquilibrationResult> slot_equilibration;
    std::vector<uint64_t> swaps_proposed;
    std::vector<uint64_t> swaps_accepted;
    std::vector<uint64_t> roundtrips;

    bool operator==(const RealizationBundle &other) const;
};

nlohmann::json bundle_to_json(const RealizationBundle &b);
RealizationBundle bundle_from_json(const nlohmann::json &j);

/// Resumable PT simulation of one realization. Swap passes happen whenever
/// the Metropolis sweep count reaches a multiple of the cadence, and chunks
/// never straddle a swap or the thermalization boundary, so the trajectory
/// does not depend on how advance() calls are split.
class RealizationRunner {
   public:
    RealizationRunner(
        const EnsembleConfig &config,
        const CouplingHypergraph &h,
        const TemperatureLadder &ladder,
        uint32_t realization);

    uint32_t realization() const {
        return realization_;
    }
    uint64_t sweeps_done() const {
        return sweeps_done_;
    }
    uint64_t total_sweeps() const {
        return config_.total_sweeps();
    }
    bool finished() const {
        return sweeps_done_ >= total_sweeps();
    }
    const PTState &pt_state() const {
        return state_;
    }

    /// Runs at most `max_sweeps` more sweeps (fewer if the run ends); stops
    /// early between chunks once `stop` is set.
    void advance(uint64_t max_sweeps, Execution exec, const std::atomic<bool> *stop = nullptr);
    RealizationBundle bundle() const;

    nlohmann::json save() const;
    /// Restores a runner saved by save(); the config, ladder and hypergraph must match.
    static RealizationRunner load(
        const EnsembleConfig &config,
        const CouplingHypergraph &h,
        const TemperatureLadder &ladder,
        const nlohmann::json &j);

   private:
    void record_series(std::span<const int64_t> slot_energies);

    EnsembleConfig config_;
    uint32_t realization_;
    SpinModel model_;
    std::optional<CorrelatorPlan> plan_;
    PTState state_;
    uint64_t sweeps_done_ = 0;
    std::vector<SlotStats> slots_;
    LogBinAccumulator total_series_;
};

RealizationBundle run_realization(
    const EnsembleConfig &config,
    const CouplingHypergraph &h,
    const TemperatureLadder &ladder,
    uint32_t realization,
    Execution exec = Execution::kParallel);

struct JackknifeEstimate {
    double value = 0;
    double error = 0;
    size_t n_samples = 0;
};

/// Leave-one-out jackknife. `statistic(k)` evaluates the estimator on all
/// samples except k, and on all samples when k == n.
///   value = n theta - (n-1) mean(theta_k),
///   error = sqrt((n-1)/n sum (theta_k - mean)^2).
JackknifeEstimate jackknife(size_t n, const std::function<double(size_t excluded)> &statistic);
JackknifeEstimate jackknife_mean(std::span<const double> values);
/// Statistic sum(num) / sum(den).
JackknifeEstimate jackknife_ratio(std::span<const double> numerators, std::span<const double> denominators);

/// Disorder-averaged observables at one ladder slot.
struct BetaRecord {
    double beta = 0;
    JackknifeEstimate energy;
    JackknifeEstimate specific_heat;
    JackknifeEstimate order_parameter;
    JackknifeEstimate susceptibility;
    /// nullopt when the disorder-averaged correlator has no second moment
    /// (or the geometry has no correlator).
    std::optional<JackknifeEstimate> xi;
    NormalizedHistogram histogram;
    std::optional<CorrelatorProfile> correlator;
};

struct EnsembleResult {
    CodeKind code = CodeKind::kCheckerboard;
    PauliType sector = PauliType::kX;
    int lattice_size = 0;
    double p = 0;
    uint32_t realizations = 0;
    uint32_t effective_realizations = 0;
    std::vector<uint32_t> excluded;
    std::vector<BetaRecord> records;
};

/// Thermal moments of one slot of one realization.
struct SlotMoments {
    double energy = 0;
    double energy_sq = 0;
    double specific_heat = 0;
    double order_parameter = 0;
    double susceptibility = 0;
};
SlotMoments slot_moments(const SlotStats &slot, uint32_t spin_count, uint32_t coupling_count);

/// Disorder average over the equilibrated bundles with jackknife errors.
/// Throws when fewer than two bundles pass the equilibration check.
EnsembleResult aggregate(const EnsembleConfig &config, std::span<const RealizationBundle> bundles);

/// Progress of an ensemble: finished bundles plus saved in-flight runners.
struct EnsembleProgress {
    TemperatureLadder ladder;
    bool ladder_tuned = false;
    bool tuning_converged = true;
    std::map<uint32_t, RealizationBundle> completed;
    std::map<uint32_t, nlohmann::json> partial;

    bool complete(const EnsembleConfig &config) const {
        return completed.size() == config.realizations;
    }
};

EnsembleProgress start_ensemble(const EnsembleConfig &config, Execution exec = Execution::kParallel);

struct RunControl {
    /// Set asynchronously (e.g. by a signal handler) to stop at the next chunk boundary.
    const std::atomic<bool> *stop = nullptr;
    /// Test hook: each realization runs at most this many sweeps per session (0 = no limit).
    uint64_t sweep_budget = 0;
    /// Called (serialized) whenever a realization finishes.
    std::function<void(const RealizationBundle &)> on_complete;
    /// Parallel: realizations across threads. Serial: the reference path.
    Execution exec = Execution::kParallel;
};

/// Advances every unfinished realization. Returns true when the ensemble is complete.
bool run_ensemble(const EnsembleConfig &config, EnsembleProgress &progress, const RunControl &control);

constexpr const char *kCheckpointMagic = "FRACTONLAB-CHECKPOINT 1";
constexpr const char *kBundleMagic = "FRACTONLAB-BUNDLE 1";

nlohmann::json checkpoint_to_json(const EnsembleConfig &config, const EnsembleProgress &progress);
/// Rejects checkpoints whose config or geometry differs from `config`.
EnsembleProgress checkpoint_from_json(const EnsembleConfig &config, const nlohmann::json &j);

}  // namespace fractonlab

#endif
