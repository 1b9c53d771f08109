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


#include "fractonlab/duality.h"

#include <cmath>
#include <functional>
#include <stdexcept>

namespace fractonlab {

namespace {

void check_rate(double p) {
    if (!(p >= 0 && p <= 1)) {
        throw std::invalid_argument("Error rate must lie in [0, 1] (got " + std::to_string(p) + ").");
    }
}

// Root of a function increasing on [lo, hi] with f(lo) < 0 < f(hi).
double bisect(const std::function<double(double)> &f, double lo, double hi) {
    while (hi - lo > kBisectionTolerance * 0.5) {
        double mid = 0.5 * (lo + hi);
        if (f(mid) < 0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace

double binary_entropy(double p) {
    check_rate(p);
    if (p == 0 || p == 1) {
        return 0;
    }
    return -p * std::log2(p) - (1 - p) * std::log2(1 - p);
}

EntropyPair entropy_sum(double p_x, double p_z) {
    return EntropyPair{p_x, p_z, binary_entropy(p_x) + binary_entropy(p_z)};
}

double dual_threshold(double p1) {
    if (!(p1 > 0 && p1 < 0.5)) {
        throw std::invalid_argument("dual_threshold needs 0 < p1 < 0.5 (got " + std::to_string(p1) + ").");
    }
    double target = 1 - binary_entropy(p1);
    return bisect([&](double p) { return binary_entropy(p) - target; }, 0, 0.5);
}

double self_dual_point() {
    return bisect([](double p) { return binary_entropy(p) - 0.5; }, 0, 0.5);
}

ReplicatedFactors replicated_factors(int n, double coupling, double p) {
    if (n < 1) {
        throw std::invalid_argument("Replica count must be >= 1.");
    }
    if (!(coupling > 0)) {
        throw std::invalid_argument("Coupling K must be > 0.");
    }
    if (!(p > 0 && p < 1)) {
        throw std::invalid_argument("Error rate must lie in (0, 1).");
    }
    ReplicatedFactors f;
    f.n = n;
    f.coupling = coupling;
    f.p = p;
    double c = 2 * std::cosh(coupling);
    double s = 2 * std::sinh(coupling);
    double norm = std::pow(2.0, -0.5 * n);
    for (int k = 0; k <= n; k++) {
        double m = (double)(n - 2 * k);
        f.x.push_back(p * std::exp(m * coupling) + (1 - p) * std::exp(-m * coupling));
        double sign = (k % 2 == 0) ? 1.0 : -1.0;
        f.x_star.push_back(norm * (1 - p + sign * p) * std::pow(c, n - k) * std::pow(s, k));
    }
    return f;
}

double nishimori_dual_ratio(int k, double p) {
    return std::pow(1 - 2 * p, k % 2 == 0 ? k : k + 1);
}

std::vector<ThresholdEntry> known_thresholds() {
    return {
        {"2D surface code", 0.1094, 0.1094, 0.9962, 0.0009, false},
        {"2D color code", 0.109, 0.109, 0.994, 0.009, false},
        {"3D toric code", 0.2327, 0.033, 0.99, 0.02, false},
        // Published without an uncertainty; half a unit in the last digit.
        {"3D color code", 0.276, 0.019, 0.986, 0.0005, false},
        {"X-cube code", 0.152, 0.075, 1.00, 0.01, false},
        {"Checkerboard code", 0.108, 0.108, 0.987, 0.008, false},
        {"Haah's code", 0.11, 0.11, 1.00, 0.005, true},
    };
}

std::vector<ThresholdCheck> qgv_check(const std::vector<ThresholdEntry> &table) {
    std::vector<ThresholdCheck> out;
    for (const auto &e : table) {
        ThresholdCheck c;
        c.entry = e;
        c.entropy_sum = entropy_sum(e.p_x, e.p_z).entropy_sum;
        if (e.quoted_sum) {
            c.matches_quoted = std::abs(c.entropy_sum - *e.quoted_sum) <= e.quoted_uncertainty;
        }
        c.exceeds_bound = c.entropy_sum - 1 > e.quoted_uncertainty;
        out.push_back(c);
    }
    return out;
}

}  // namespace fractonlab
