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


#ifndef _FRACTONLAB_DUALITY_H
#define _FRACTONLAB_DUALITY_H

#include <optional>
#include <string>
#include <vector>

namespace fractonlab {

/// H(p) = -p log2 p - (1-p) log2 (1-p), with H(0) = H(1) = 0.
double binary_entropy(double p);

struct EntropyPair {
    double p_x = 0;
    double p_z = 0;
    /// H(p_x) + H(p_z) in bits.
    double entropy_sum = 0;
};

EntropyPair entropy_sum(double p_x, double p_z);

/// Bisection tolerance on p.
constexpr double kBisectionTolerance = 1e-10;

/// The p2 < 1/2 solving H(p2) = 1 - H(p1). Requires 0 < p1 < 1/2.
double dual_threshold(double p1);

/// p* < 1/2 with H(p*) = 1/2.
double self_dual_point();

/// Replica-averaged Boltzmann factors and their Fourier duals:
///   x_k  = p e^{(n-2k)K} + (1-p) e^{-(n-2k)K}
///   x*_k = 2^{-n/2} (1 - p + (-1)^k p) (e^K + e^{-K})^{n-k} (e^K - e^{-K})^k
struct ReplicatedFactors {
    int n = 0;
    double coupling = 0;
    double p = 0;
    std::vector<double> x;
    std::vector<double> x_star;
};

ReplicatedFactors replicated_factors(int n, double coupling, double p);

/// x*_k / x*_0 on the Nishimori line: (1-2p)^k for even k, (1-2p)^{k+1} for odd k.
double nishimori_dual_ratio(int k, double p);

/// One threshold entry with its published entropy sum.
struct ThresholdEntry {
    std::string code;
    double p_x = 0;
    double p_z = 0;
    /// Published H(p_x) + H(p_z) and its uncertainty; nullopt when not tabulated.
    std::optional<double> quoted_sum;
    double quoted_uncertainty = 0;
    /// Entries derived from the entropy relation rather than measured.
    bool estimate = false;
};

struct ThresholdCheck {
    ThresholdEntry entry;
    double entropy_sum = 0;
    /// |sum - quoted| within the quoted uncertainty (true when nothing is quoted).
    bool matches_quoted = true;
    /// sum exceeds 1 by more than the quoted uncertainty.
    bool exceeds_bound = false;
};

/// Known optimal code-capacity thresholds of topological codes with their
/// published entropy sums. The last row is the estimate for Haah's code.
std::vector<ThresholdEntry> known_thresholds();

std::vector<ThresholdCheck> qgv_check(const std::vector<ThresholdEntry> &table);

}  // namespace fractonlab

#endif
