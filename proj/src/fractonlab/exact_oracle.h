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

#ifndef _FRACTONLAB_EXACT_ORACLE_H
#define _FRACTONLAB_EXACT_ORACLE_H

#include <cstdint>
#include <span>
#include <vector>

#include "fractonlab/observables.h"
#include "fractonlab/parallel.h"
#include "fractonlab/sm_map.h"

namespace fractonlab {

/// Largest spin count the enumerator accepts (2^24 states).
constexpr uint32_t kMaxEnumerableSpins = 24;

/// Exact thermodynamics of a small instance at one inverse temperature.
struct ExactSolution {
    double beta = 0;
    double log_z = 0;
    double mean_energy = 0;
    double mean_energy_sq = 0;
    NormalizedHistogram p_of_e;
    /// Thermal g(r) for checkerboard geometry; empty otherwise.
    std::vector<double> correlator;
};

/// Number of states at each energy, by Gray-code enumeration of all 2^N_s
/// configurations. Counts are integers, so stripes combine exactly in any order.
EnergyHistogram density_of_states(
    const CouplingHypergraph &h, const DisorderRealization &d, Execution exec = Execution::kParallel);

/// Thermodynamics from a density of states, accumulated in log space.
ExactSolution solve_from_dos(const EnergyHistogram &dos, double beta);

/// Full enumeration at `beta`. Adds the thermal correlator when the geometry
/// supports it and `with_correlator` is set.
ExactSolution enumerate(
    const CouplingHypergraph &h,
    const DisorderRealization &d,
    double beta,
    bool with_correlator = false,
    Execution exec = Execution::kParallel);

double log_partition(const CouplingHypergraph &h, const DisorderRealization &d, double beta);

/// dF = (1/beta) [ln Z(eta) - ln Z(eta + lambda)], lambda flipping `flip_set`.
/// Exactly 0 at beta = 0.
double delta_f(
    const CouplingHypergraph &h, const DisorderRealization &d, std::span<const uint32_t> flip_set, double beta);

/// Number of configurations attaining the minimum energy.
uint64_t exact_gsd_count(const CouplingHypergraph &h, const DisorderRealization &d);

}  // namespace fractonlab

#endif
