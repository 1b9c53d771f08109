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

#ifndef _FRACTONLAB_OBSERVABLES_H
#define _FRACTONLAB_OBSERVABLES_H

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fractonlab/sm_map.h"

namespace fractonlab {

/// Probability view of an energy distribution on a regular grid.
struct NormalizedHistogram {
    int64_t e_min = 0;
    int64_t bin_width = 2;
    std::vector<double> probability;

    int64_t energy_of(size_t bin) const {
        return e_min + (int64_t)bin * bin_width;
    }
    double mean() const;
    double mean_sq() const;
};

/// Exact counts of integer energies on a grid of spacing `bin_width`.
struct EnergyHistogram {
    int64_t e_min = 0;
    int64_t bin_width = 2;
    std::vector<uint64_t> counts;
    uint64_t total = 0;

    void add(int64_t energy, uint64_t count = 1);
    int64_t energy_of(size_t bin) const {
        return e_min + (int64_t)bin * bin_width;
    }
    bool empty() const {
        return total == 0;
    }
    NormalizedHistogram normalized() const;
    bool operator==(const EnergyHistogram &other) const = default;
};

/// Lossless histogram of an energy series (bin width 2: energies of a model
/// with N_c couplings all share the parity of N_c).
EnergyHistogram accumulate_histogram(std::span<const int64_t> samples, int64_t bin_width = 2);

/// Count-wise sum. Grids must be compatible (same width, aligned offsets).
EnergyHistogram merge_histograms(const EnergyHistogram &a, const EnergyHistogram &b);

struct ReweightResult {
    NormalizedHistogram histogram;
    double effective_sample_size = 0;
    bool low_effective_sample_size = false;
};

/// Single-histogram reweighting: counts(E) e^{-(beta_to - beta_from) E},
/// renormalized in log space. Flags an effective sample size below `min_ess`.
ReweightResult reweight_histogram(
    const EnergyHistogram &h, double beta_from, double beta_to, double min_ess = 100);

/// Same reweighting applied to an already-normalized distribution.
NormalizedHistogram reweight_distribution(const NormalizedHistogram &h, double beta_from, double beta_to);

/// Total variation distance 1/2 sum |p - q| over the union of both grids.
double total_variation(const NormalizedHistogram &a, const NormalizedHistogram &b);

/// Correlator of the checkerboard model along z,
///   g(r) = 1/N sum_v < s_v s_{v+x+y} s'_{r} s''_{r} >,
/// where the second pair is (v+y+rz, v+x+rz) for odd r and (v+rz, v+x+y+rz)
/// for even r, so every factor sits on the spin sublattice.
struct CorrelatorProfile {
    int lattice_size = 0;
    std::vector<double> g;
    std::vector<double> error;
};

/// Precomputed spin quadruples for every (r, anchor).
class CorrelatorPlan {
   public:
    explicit CorrelatorPlan(const CouplingHypergraph &h);
    int lattice_size() const {
        return lattice_size_;
    }
    /// g(r) of one configuration.
    std::vector<double> sample(std::span<const int8_t> spins) const;

   private:
    int lattice_size_;
    size_t anchors_;
    std::vector<std::array<uint32_t, 4>> quads_;
};

/// Running mean and standard error of g(r) over samples.
class CorrelatorAccumulator {
   public:
    explicit CorrelatorAccumulator(int lattice_size = 0);
    void add(std::span<const double> g);
    uint64_t count() const {
        return count_;
    }
    CorrelatorProfile profile() const;
    const std::vector<double> &sums() const {
        return sum_;
    }
    const std::vector<double> &sums_sq() const {
        return sum_sq_;
    }
    static CorrelatorAccumulator from_sums(int L, uint64_t count, std::vector<double> sum, std::vector<double> sum_sq);
    bool operator==(const CorrelatorAccumulator &other) const = default;

   private:
    int lattice_size_;
    uint64_t count_ = 0;
    std::vector<double> sum_;
    std::vector<double> sum_sq_;
};

/// Thermal average of g(r) over stored configurations. Rejects non-checkerboard geometry.
CorrelatorProfile correlator(const CouplingHypergraph &h, const std::vector<std::vector<int8_t>> &samples);

/// Second-moment correlation length along the correlator axis,
///   xi = sqrt(G(0)/G(k) - 1) / (2 sin(k/2)),  k = 2 pi / L,
/// with G(k) = sum_r g(r) cos(k r). nullopt when G(k) <= 0 or G(0)/G(k) < 1.
std::optional<double> xi_second_moment(std::span<const double> g);
std::optional<double> xi_second_moment(const CorrelatorProfile &profile);

/// C_V = beta^2 (<E^2> - <E>^2) / N.
double specific_heat(std::span<const double> energies, double beta, double n);
/// chi = beta N (<O^2> - <O>^2).
double susceptibility(std::span<const double> order_parameter, double beta, double n);
/// O = (1/N_c) sum_c eta_c prod sigma, which equals -E / N_c.
double order_parameter(int64_t energy, size_t coupling_count);

/// Time series split into bins t in [2^tau, 2^{tau+1} - 1]; t = 0 is not binned.
struct BinnedSeries {
    struct Bin {
        int tau = 0;
        uint64_t count = 0;
        double mean = 0;
        double m2 = 0;
        bool complete = false;
        double error() const;
        bool operator==(const Bin &other) const = default;
    };
    std::vector<Bin> bins;
    bool operator==(const BinnedSeries &other) const = default;
};

/// Online logarithmic binning (Welford update inside each bin).
class LogBinAccumulator {
   public:
    void add(double value);
    uint64_t length() const {
        return length_;
    }
    BinnedSeries binned() const;
    static LogBinAccumulator from_bins(uint64_t length, std::vector<BinnedSeries::Bin> bins);
    const std::vector<BinnedSeries::Bin> &raw_bins() const {
        return bins_;
    }
    bool operator==(const LogBinAccumulator &other) const = default;

   private:
    uint64_t length_ = 0;
    std::vector<BinnedSeries::Bin> bins_;
};

BinnedSeries log_bin(std::span<const double> series);

struct EquilibrationResult {
    bool equilibrated = false;
    /// Last bin of the earliest agreeing triple, -1 when not equilibrated.
    int tau_first = -1;
    std::string diagnostic;
};

/// Equilibrated iff the last three complete bins' means overlap pairwise
/// within their 1 sigma error bars. Bins need >= 2 samples to be compared.
EquilibrationResult equilibration_check(const BinnedSeries &binned);
EquilibrationResult equilibration_check(std::span<const double> series);

/// "e_min bin_width n_bins total" then one count per line.
void write_histogram_text(const EnergyHistogram &h, std::ostream &out);
EnergyHistogram read_histogram_text(std::istream &in);

/// "L" then "r g(r) error" per line.
void write_correlator_text(const CorrelatorProfile &profile, std::ostream &out);
CorrelatorProfile read_correlator_text(std::istream &in);

}  // namespace fractonlab

#endif
