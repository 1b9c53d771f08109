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

#include "fractonlab/observables.h"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <stdexcept>

namespace fractonlab {

double NormalizedHistogram::mean() const {
    double m = 0;
    for (size_t b = 0; b < probability.size(); b++) {
        m += probability[b] * (double)energy_of(b);
    }
    return m;
}

double NormalizedHistogram::mean_sq() const {
    double m = 0;
    for (size_t b = 0; b < probability.size(); b++) {
        double e = (double)energy_of(b);
        m += probability[b] * e * e;
    }
    return m;
}

void EnergyHistogram::add(int64_t energy, uint64_t count) {
    if (bin_width <= 0) {
        throw std::invalid_argument("Histogram bin width must be positive.");
    }
    if (count == 0) {
        return;
    }
    if (counts.empty()) {
        e_min = energy;
        counts.assign(1, 0);
    }
    int64_t offset = energy - e_min;
    if (offset % bin_width != 0) {
        throw std::invalid_argument("Energy is not on the histogram grid.");
    }
    if (offset < 0) {
        size_t grow = (size_t)(-offset / bin_width);
        counts.insert(counts.begin(), grow, 0);
        e_min = energy;
        offset = 0;
    }
    size_t bin = (size_t)(offset / bin_width);
    if (bin >= counts.size()) {
        counts.resize(bin + 1, 0);
    }
    counts[bin] += count;
    total += count;
}

NormalizedHistogram EnergyHistogram::normalized() const {
    NormalizedHistogram n;
    n.e_min = e_min;
    n.bin_width = bin_width;
    n.probability.resize(counts.size(), 0);
    if (total == 0) {
        return n;
    }
    for (size_t b = 0; b < counts.size(); b++) {
        n.probability[b] = (double)counts[b] / (double)total;
    }
    return n;
}

EnergyHistogram accumulate_histogram(std::span<const int64_t> samples, int64_t bin_width) {
    EnergyHistogram h;
    h.bin_width = bin_width;
    for (int64_t e : samples) {
        h.add(e);
    }
    return h;
}

EnergyHistogram merge_histograms(const EnergyHistogram &a, const EnergyHistogram &b) {
    if (a.bin_width != b.bin_width) {
        throw std::invalid_argument("Cannot merge histograms with different bin widths.");
    }
    EnergyHistogram result = a;
    for (size_t bin = 0; bin < b.counts.size(); bin++) {
        result.add(b.energy_of(bin), b.counts[bin]);
    }
    return result;
}

ReweightResult reweight_histogram(const EnergyHistogram &h, double beta_from, double beta_to, double min_ess) {
    if (h.empty()) {
        throw std::invalid_argument("Cannot reweight an empty histogram.");
    }
    double dbeta = beta_to - beta_from;
    double max_log = -std::numeric_limits<double>::infinity();
    for (size_t b = 0; b < h.counts.size(); b++) {
        if (h.counts[b]) {
            max_log = std::max(max_log, -dbeta * (double)h.energy_of(b));
        }
    }
    ReweightResult result;
    result.histogram.e_min = h.e_min;
    result.histogram.bin_width = h.bin_width;
    result.histogram.probability.assign(h.counts.size(), 0);
    double norm = 0;
    double sum_w = 0;
    double sum_w2 = 0;
    for (size_t b = 0; b < h.counts.size(); b++) {
        if (!h.counts[b]) {
            continue;
        }
        double w = std::exp(-dbeta * (double)h.energy_of(b) - max_log);
        double c = (double)h.counts[b];
        result.histogram.probability[b] = c * w;
        norm += c * w;
        sum_w += c * w;
        sum_w2 += c * w * w;
    }
    for (double &p : result.histogram.probability) {
        p /= norm;
    }
    result.effective_sample_size = sum_w * sum_w / sum_w2;
    result.low_effective_sample_size = result.effective_sample_size < min_ess;
    return result;
}

NormalizedHistogram reweight_distribution(const NormalizedHistogram &h, double beta_from, double beta_to) {
    double dbeta = beta_to - beta_from;
    double max_log = -std::numeric_limits<double>::infinity();
    for (size_t b = 0; b < h.probability.size(); b++) {
        if (h.probability[b] > 0) {
            max_log = std::max(max_log, std::log(h.probability[b]) - dbeta * (double)h.energy_of(b));
        }
    }
    if (!std::isfinite(max_log)) {
        throw std::invalid_argument("Cannot reweight an empty distribution.");
    }
    NormalizedHistogram result = h;
    double norm = 0;
    for (size_t b = 0; b < h.probability.size(); b++) {
        double p = h.probability[b];
        result.probability[b] = p > 0 ? std::exp(std::log(p) - dbeta * (double)h.energy_of(b) - max_log) : 0;
        norm += result.probability[b];
    }
    for (double &p : result.probability) {
        p /= norm;
    }
    return result;
}

double total_variation(const NormalizedHistogram &a, const NormalizedHistogram &b) {
    if (a.bin_width != b.bin_width || (a.e_min - b.e_min) % a.bin_width != 0) {
        throw std::invalid_argument("Distributions live on incompatible grids.");
    }
    int64_t lo = std::min(a.e_min, b.e_min);
    int64_t hi = std::max(a.energy_of(a.probability.size()), b.energy_of(b.probability.size()));
    auto at = [](const NormalizedHistogram &h, int64_t e) {
        int64_t off = e - h.e_min;
        if (off < 0) {
            return 0.0;
        }
        size_t bin = (size_t)(off / h.bin_width);
        return bin < h.probability.size() ? h.probability[bin] : 0.0;
    };
    double tv = 0;
    for (int64_t e = lo; e < hi; e += a.bin_width) {
        tv += std::abs(at(a, e) - at(b, e));
    }
    return tv / 2;
}

CorrelatorPlan::CorrelatorPlan(const CouplingHypergraph &h) : lattice_size_(h.lattice_size), anchors_(h.spin_count) {
    if (h.geometry != Geometry::kCheckerboardFcc) {
        throw std::invalid_argument("The correlator is defined for the checkerboard (FCC) geometry only.");
    }
    int L = lattice_size_;
    quads_.reserve((size_t)L * anchors_);
    for (int r = 0; r < L; r++) {
        for (uint32_t s = 0; s < h.spin_count; s++) {
            auto [x, y, z] = h.spin_positions[s];
            std::array<int32_t, 4> q;
            q[0] = h.spin_at(x, y, z);
            q[1] = h.spin_at(x + 1, y + 1, z);
            if (r % 2 == 1) {
                q[2] = h.spin_at(x, y + 1, z + r);
                q[3] = h.spin_at(x + 1, y, z + r);
            } else {
                q[2] = h.spin_at(x, y, z + r);
                q[3] = h.spin_at(x + 1, y + 1, z + r);
            }
            std::array<uint32_t, 4> u;
            for (int k = 0; k < 4; k++) {
                if (q[k] < 0) {
                    throw std::logic_error("Correlator pattern left the spin sublattice.");
                }
                u[k] = (uint32_t)q[k];
            }
            quads_.push_back(u);
        }
    }
}

std::vector<double> CorrelatorPlan::sample(std::span<const int8_t> spins) const {
    std::vector<double> g(lattice_size_, 0);
    for (int r = 0; r < lattice_size_; r++) {
        int64_t sum = 0;
        const auto *q = &quads_[(size_t)r * anchors_];
        for (size_t v = 0; v < anchors_; v++) {
            sum += spins[q[v][0]] * spins[q[v][1]] * spins[q[v][2]] * spins[q[v][3]];
        }
        g[r] = (double)sum / (double)anchors_;
    }
    return g;
}

CorrelatorAccumulator::CorrelatorAccumulator(int lattice_size)
    : lattice_size_(lattice_size), sum_(lattice_size, 0), sum_sq_(lattice_size, 0) {
}

void CorrelatorAccumulator::add(std::span<const double> g) {
    if (g.size() != sum_.size()) {
        throw std::invalid_argument("Correlator sample has the wrong length.");
    }
    for (size_t r = 0; r < g.size(); r++) {
        sum_[r] += g[r];
        sum_sq_[r] += g[r] * g[r];
    }
    count_++;
}

CorrelatorProfile CorrelatorAccumulator::profile() const {
    CorrelatorProfile p;
    p.lattice_size = lattice_size_;
    p.g.assign(sum_.size(), 0);
    p.error.assign(sum_.size(), 0);
    if (count_ == 0) {
        return p;
    }
    double n = (double)count_;
    for (size_t r = 0; r < sum_.size(); r++) {
        double m = sum_[r] / n;
        p.g[r] = m;
        if (count_ > 1) {
            double var = std::max(0.0, (sum_sq_[r] / n - m * m) * n / (n - 1));
            p.error[r] = std::sqrt(var / n);
        }
    }
    return p;
}

CorrelatorAccumulator CorrelatorAccumulator::from_sums(
    int L, uint64_t count, std::vector<double> sum, std::vector<double> sum_sq) {
    if (sum.size() != (size_t)L || sum_sq.size() != (size_t)L) {
        throw std::invalid_argument("Correlator sums have the wrong length.");
    }
    CorrelatorAccumulator acc(L);
    acc.count_ = count;
    acc.sum_ = std::move(sum);
    acc.sum_sq_ = std::move(sum_sq);
    return acc;
}

CorrelatorProfile correlator(const CouplingHypergraph &h, const std::vector<std::vector<int8_t>> &samples) {
    CorrelatorPlan plan(h);
    CorrelatorAccumulator acc(plan.lattice_size());
    for (const auto &s : samples) {
        acc.add(plan.sample(s));
    }
    return acc.profile();
}

std::optional<double> xi_second_moment(std::span<const double> g) {
    size_t L = g.size();
    if (L < 2) {
        return std::nullopt;
    }
    double k = 2 * std::numbers::pi / (double)L;
    double g0 = 0;
    double gk = 0;
    double scale = 0;
    for (size_t r = 0; r < L; r++) {
        g0 += g[r];
        gk += g[r] * std::cos(k * (double)r);
        scale += std::abs(g[r]);
    }
    // A flat profile has G(k) = 0 exactly; roundoff must not turn that into a huge xi.
    if (gk <= 1e-12 * scale) {
        return std::nullopt;
    }
    double ratio = g0 / gk;
    if (ratio < 1) {
        return std::nullopt;
    }
    return std::sqrt(ratio - 1) / (2 * std::sin(k / 2));
}

std::optional<double> xi_second_moment(const CorrelatorProfile &profile) {
    return xi_second_moment(std::span<const double>(profile.g));
}

namespace {

double variance_population(std::span<const double> xs) {
    if (xs.size() < 2) {
        throw std::invalid_argument("Fluctuation estimators need at least 2 samples.");
    }
    double mean = 0;
    for (double x : xs) {
        mean += x;
    }
    mean /= (double)xs.size();
    double var = 0;
    for (double x : xs) {
        var += (x - mean) * (x - mean);
    }
    return var / (double)xs.size();
}

}  // namespace

double specific_heat(std::span<const double> energies, double beta, double n) {
    return beta * beta * variance_population(energies) / n;
}

double susceptibility(std::span<const double> order_parameter, double beta, double n) {
    return beta * n * variance_population(order_parameter);
}

double order_parameter(int64_t energy, size_t coupling_count) {
    return -(double)energy / (double)coupling_count;
}

double BinnedSeries::Bin::error() const {
    if (count < 2) {
        return std::numeric_limits<double>::infinity();
    }
    double var = m2 / (double)(count - 1);
    return std::sqrt(var / (double)count);
}

void LogBinAccumulator::add(double value) {
    uint64_t t = length_++;
    if (t == 0) {
        return;
    }
    int tau = 63 - __builtin_clzll(t);
    while ((int)bins_.size() <= tau) {
        BinnedSeries::Bin b;
        b.tau = (int)bins_.size();
        bins_.push_back(b);
    }
    auto &b = bins_[tau];
    b.count++;
    double delta = value - b.mean;
    b.mean += delta / (double)b.count;
    b.m2 += delta * (value - b.mean);
    b.complete = b.count == (uint64_t{1} << tau);
}

BinnedSeries LogBinAccumulator::binned() const {
    return BinnedSeries{bins_};
}

LogBinAccumulator LogBinAccumulator::from_bins(uint64_t length, std::vector<BinnedSeries::Bin> bins) {
    LogBinAccumulator acc;
    acc.length_ = length;
    acc.bins_ = std::move(bins);
    return acc;
}

BinnedSeries log_bin(std::span<const double> series) {
    LogBinAccumulator acc;
    for (double v : series) {
        acc.add(v);
    }
    return acc.binned();
}

EquilibrationResult equilibration_check(const BinnedSeries &binned) {
    EquilibrationResult result;
    int last = -1;
    for (const auto &b : binned.bins) {
        if (b.complete) {
            last = b.tau;
        }
    }
    if (last < 3) {
        result.diagnostic = "series too short: need three complete bins with >= 2 samples (length >= 16)";
        return result;
    }
    auto agree = [&](int tau) {
        const auto &a = binned.bins[tau - 2];
        const auto &b = binned.bins[tau - 1];
        const auto &c = binned.bins[tau];
        auto overlap = [](const BinnedSeries::Bin &u, const BinnedSeries::Bin &v) {
            return std::abs(u.mean - v.mean) <= u.error() + v.error();
        };
        return overlap(a, b) && overlap(b, c) && overlap(a, c);
    };
    if (!agree(last)) {
        result.diagnostic = "last three bins disagree (tau " + std::to_string(last - 2) + ".." + std::to_string(last) + ")";
        return result;
    }
    result.equilibrated = true;
    for (int tau = 3; tau <= last; tau++) {
        if (agree(tau)) {
            result.tau_first = tau;
            break;
        }
    }
    return result;
}

EquilibrationResult equilibration_check(std::span<const double> series) {
    return equilibration_check(log_bin(series));
}

void write_histogram_text(const EnergyHistogram &h, std::ostream &out) {
    out << h.e_min << ' ' << h.bin_width << ' ' << h.counts.size() << ' ' << h.total << '\n';
    for (uint64_t c : h.counts) {
        out << c << '\n';
    }
}

EnergyHistogram read_histogram_text(std::istream &in) {
    EnergyHistogram h;
    size_t n = 0;
    if (!(in >> h.e_min >> h.bin_width >> n >> h.total)) {
        throw std::invalid_argument("Histogram header must be 'e_min bin_width n_bins total'.");
    }
    h.counts.resize(n);
    uint64_t sum = 0;
    for (auto &c : h.counts) {
        if (!(in >> c)) {
            throw std::invalid_argument("Histogram file ended early.");
        }
        sum += c;
    }
    if (sum != h.total) {
        throw std::invalid_argument("Histogram counts do not add up to the header total.");
    }
    return h;
}

void write_correlator_text(const CorrelatorProfile &profile, std::ostream &out) {
    out << profile.lattice_size << '\n';
    out << std::setprecision(17);
    for (size_t r = 0; r < profile.g.size(); r++) {
        out << r << ' ' << profile.g[r] << ' ' << (r < profile.error.size() ? profile.error[r] : 0.0) << '\n';
    }
}

CorrelatorProfile read_correlator_text(std::istream &in) {
    CorrelatorProfile p;
    if (!(in >> p.lattice_size) || p.lattice_size <= 0) {
        throw std::invalid_argument("Correlator header must be 'L'.");
    }
    p.g.resize(p.lattice_size);
    p.error.resize(p.lattice_size);
    for (int r = 0; r < p.lattice_size; r++) {
        int idx;
        if (!(in >> idx >> p.g[r] >> p.error[r]) || idx != r) {
            throw std::invalid_argument("Correlator file: bad row " + std::to_string(r) + ".");
        }
    }
    return p;
}

}  // namespace fractonlab
