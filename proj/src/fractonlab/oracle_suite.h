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


#ifndef _FRACTONLAB_ORACLE_SUITE_H
#define _FRACTONLAB_ORACLE_SUITE_H

#include <cstdint>
#include <string>
#include <vector>

#include "fractonlab/mc_core.h"
#include "fractonlab/observables.h"
#include "fractonlab/tempering.h"

namespace fractonlab {

/// Energy statistics of one long Markov chain.
struct ChainSample {
    EnergyHistogram histogram;
    double mean_energy = 0;
    /// Standard error of the mean from batch means (autocorrelation-safe).
    double mean_error = 0;
};

/// Runs `burn_in` unrecorded sweeps, then records the energy after each of `sweeps` sweeps.
ChainSample sample_chain(
    const SpinModel &model,
    double beta,
    uint64_t sweeps,
    const SweepSchedule &schedule,
    uint64_t seed,
    uint64_t burn_in = 1000);

/// Stationarity check independent of mixing time: `chains` chains start from
/// configurations drawn from the exact Boltzmann distribution (two passes over
/// all 2^N_s states) and record `sweeps_per_chain` sweeps each. A correct kernel
/// keeps every recorded sweep distributed exactly as P(E). mean_error treats
/// the chains as independent batches.
ChainSample sample_from_equilibrium(
    const SpinModel &model,
    double beta,
    uint64_t chains,
    uint64_t sweeps_per_chain,
    const SweepSchedule &schedule,
    uint64_t seed);

/// Parallel tempering over `ladder`; returns one sample per slot.
std::vector<ChainSample> sample_tempering(
    const SpinModel &model,
    const TemperatureLadder &ladder,
    uint64_t sweeps,
    uint32_t sweeps_between_swaps,
    const SweepSchedule &schedule,
    uint64_t seed,
    Execution exec = Execution::kParallel);

struct OracleSuiteOptions {
    uint32_t spins = 12;
    uint32_t couplings = 24;
    uint32_t body = 4;
    double p = 0.2;
    uint64_t seed = 1;
    uint64_t sweeps = 1000000;
    AcceptanceRule rule = AcceptanceRule::kMetropolis;
};

struct OracleCheck {
    std::string name;
    bool passed = false;
    double value = 0;
    double tolerance = 0;
};

/// Compares long Metropolis and tempering chains and equilibrium-started
/// mixed-schedule chains on a random enumerable instance against exact
/// enumeration, plus reweighting closure.
std::vector<OracleCheck> run_oracle_suite(const OracleSuiteOptions &options);

}  // namespace fractonlab

#endif
