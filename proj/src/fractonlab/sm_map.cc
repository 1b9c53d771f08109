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

#include "fractonlab/sm_map.h"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>

#include "fractonlab/gf2.h"
#include "fractonlab/rng.h"

namespace fractonlab {

namespace {

using Offsets = std::array<std::array<int, 3>, 4>;

constexpr Offsets kFccUp = {{{0, 0, 0}, {1, 1, 0}, {0, 1, 1}, {1, 0, 1}}};
constexpr Offsets kFccDown = {{{0, 0, 0}, {-1, -1, 0}, {0, -1, -1}, {-1, 0, -1}}};
constexpr Offsets kFractalCorner = {{{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
constexpr Offsets kFractalFace = {{{0, 0, 0}, {1, 1, 0}, {0, 1, 1}, {1, 0, 1}}};
constexpr Offsets kFractalCornerInv = {{{0, 0, 0}, {-1, 0, 0}, {0, -1, 0}, {0, 0, -1}}};
constexpr Offsets kFractalFaceInv = {{{0, 0, 0}, {-1, -1, 0}, {0, -1, -1}, {-1, 0, -1}}};

const Offsets &tetrahedron(Geometry geometry, PauliType sector, int parity) {
    if (geometry == Geometry::kCheckerboardFcc) {
        return parity > 0 ? kFccUp : kFccDown;
    }
    if (sector == PauliType::kX) {
        return parity > 0 ? kFractalCorner : kFractalFace;
    }
    return parity > 0 ? kFractalCornerInv : kFractalFaceInv;
}

// Anchor of the coupling owned by qubit `q` (see CouplingAnchor).
CouplingAnchor anchor_for_qubit(const StabilizerCode &code, PauliType sector, uint32_t q) {
    const SiteCoord &c = code.site_coordinates[q];
    CouplingAnchor a;
    if (code.kind == CodeKind::kCheckerboard) {
        if ((c.x + c.y + c.z) % 2 != 0) {
            a.site = {c.x - 1, c.y - 1, c.z - 1};
            a.parity = +1;
        } else {
            a.site = {c.x, c.y, c.z};
            a.parity = -1;
        }
    } else if (sector == PauliType::kX) {
        a.site = {c.x - 1, c.y - 1, c.z - 1};
        a.parity = c.family == 1 ? +1 : -1;
    } else {
        a.site = {c.x, c.y, c.z};
        a.parity = c.family == 2 ? +1 : -1;
    }
    CubicLattice lat = code.lattice();
    for (int &v : a.site) {
        v = lat.wrap(v);
    }
    return a;
}

}  // namespace

int32_t CouplingHypergraph::spin_at(int x, int y, int z) const {
    if (spin_at_site.empty()) {
        return -1;
    }
    CubicLattice lat{lattice_size};
    return spin_at_site[lat.site_index(x, y, z)];
}

CouplingHypergraph map_error_model(const StabilizerCode &code, PauliType error_type) {
    CouplingHypergraph h;
    const auto &spins = code.stabilizers(error_type);
    h.spin_count = (uint32_t)spins.size();
    h.lattice_size = code.lattice_size;
    h.geometry = code.kind == CodeKind::kCheckerboard ? Geometry::kCheckerboardFcc : Geometry::kHaahFractal;
    h.spin_positions = code.stabilizer_anchors;
    CubicLattice lat = code.lattice();
    h.spin_at_site.assign(lat.num_sites(), -1);
    for (uint32_t s = 0; s < h.spin_count; s++) {
        const auto &p = h.spin_positions[s];
        h.spin_at_site[lat.site_index(p[0], p[1], p[2])] = (int32_t)s;
    }

    h.couplings = code.qubit_incidence(error_type);
    h.coupling_anchors.resize(h.couplings.size());
    for (uint32_t q = 0; q < h.couplings.size(); q++) {
        if (h.couplings[q].size() != 4) {
            throw std::logic_error(
                "Qubit " + std::to_string(q) + " is shared by " + std::to_string(h.couplings[q].size()) +
                " stabilizers; both codes require exactly 4.");
        }
        CouplingAnchor a = anchor_for_qubit(code, error_type, q);
        std::vector<uint32_t> expected;
        for (const auto &d : tetrahedron(h.geometry, error_type, a.parity)) {
            int32_t s = h.spin_at(a.site[0] + d[0], a.site[1] + d[1], a.site[2] + d[2]);
            if (s < 0) {
                throw std::logic_error("Tetrahedron vertex is not a spin site.");
            }
            expected.push_back((uint32_t)s);
        }
        std::sort(expected.begin(), expected.end());
        if (expected != h.couplings[q]) {
            throw std::logic_error("Coupling of qubit " + std::to_string(q) + " does not match its tetrahedron.");
        }
        h.coupling_anchors[q] = a;
    }
    return h;
}

CouplingHypergraph make_hypergraph(uint32_t spin_count, std::vector<std::vector<uint32_t>> couplings) {
    for (auto &c : couplings) {
        if (c.empty()) {
            throw std::invalid_argument("Couplings must act on at least one spin.");
        }
        std::sort(c.begin(), c.end());
        if (std::adjacent_find(c.begin(), c.end()) != c.end()) {
            throw std::invalid_argument("Coupling lists a spin twice.");
        }
        if (c.back() >= spin_count) {
            throw std::invalid_argument("Coupling spin index out of range.");
        }
    }
    CouplingHypergraph h;
    h.spin_count = spin_count;
    h.couplings = std::move(couplings);
    return h;
}

CouplingHypergraph random_hypergraph(uint32_t spin_count, uint32_t coupling_count, uint32_t body, uint64_t seed) {
    if (body == 0 || body > spin_count) {
        throw std::invalid_argument("Coupling size must be in [1, spin_count].");
    }
    RandomStream rng = RandomStream::for_purpose(seed, 0, 0, StreamPurpose::kGeneric);
    for (int attempt = 0; attempt < 1000; attempt++) {
        std::set<std::vector<uint32_t>> seen;
        std::vector<std::vector<uint32_t>> couplings;
        std::vector<uint32_t> pool(spin_count);
        while (couplings.size() < coupling_count) {
            for (uint32_t i = 0; i < spin_count; i++) {
                pool[i] = i;
            }
            // Partial Fisher-Yates draws a uniformly random k-subset.
            for (uint32_t i = 0; i < body; i++) {
                std::swap(pool[i], pool[i + rng.below(spin_count - i)]);
            }
            std::vector<uint32_t> c(pool.begin(), pool.begin() + body);
            std::sort(c.begin(), c.end());
            if (seen.insert(c).second) {
                couplings.push_back(std::move(c));
            }
        }
        std::vector<bool> covered(spin_count, false);
        for (const auto &c : couplings) {
            for (uint32_t s : c) {
                covered[s] = true;
            }
        }
        if (std::all_of(covered.begin(), covered.end(), [](bool b) { return b; }) ||
            (size_t)coupling_count * body < spin_count) {
            return make_hypergraph(spin_count, std::move(couplings));
        }
    }
    throw std::runtime_error("Could not draw a covering random hypergraph.");
}

DisorderRealization clean_disorder(const CouplingHypergraph &h) {
    DisorderRealization d;
    d.eta.assign(h.coupling_count(), +1);
    return d;
}

DisorderRealization sample_disorder(const CouplingHypergraph &h, double p, uint64_t seed, uint64_t realization_index) {
    if (!(p >= 0 && p <= 1)) {
        throw std::invalid_argument("Error rate p must lie in [0, 1].");
    }
    RandomStream rng = RandomStream::for_purpose(seed, realization_index, 0, StreamPurpose::kDisorder);
    DisorderRealization d;
    d.p = p;
    d.seed = seed;
    d.eta.resize(h.coupling_count());
    for (auto &e : d.eta) {
        // One draw per coupling regardless of p keeps streams aligned across p.
        e = rng.uniform() < p ? -1 : +1;
    }
    return d;
}

int64_t energy(const CouplingHypergraph &h, const DisorderRealization &d, std::span<const int8_t> spins) {
    if (spins.size() != h.spin_count) {
        throw std::invalid_argument("Spin configuration length does not match the hypergraph.");
    }
    if (d.eta.size() != h.coupling_count()) {
        throw std::invalid_argument("Disorder length does not match the hypergraph.");
    }
    int64_t e = 0;
    for (size_t c = 0; c < h.couplings.size(); c++) {
        int term = d.eta[c];
        for (uint32_t s : h.couplings[c]) {
            term *= spins[s];
        }
        e -= term;
    }
    return e;
}

double nishimori_beta(double p) {
    if (!(p >= 0 && p <= 1)) {
        throw std::invalid_argument("nishimori_beta requires p in [0, 1].");
    }
    if (p == 0) {
        return std::numeric_limits<double>::infinity();
    }
    if (p == 1) {
        return -std::numeric_limits<double>::infinity();
    }
    return 0.5 * (std::log1p(-p) - std::log(p));
}

double nishimori_p(double beta) {
    if (std::isnan(beta)) {
        throw std::invalid_argument("nishimori_p requires a numeric beta.");
    }
    // 1 / (1 + e^{2 beta}) written to stay accurate for large |beta|.
    if (beta >= 0) {
        double t = std::exp(-2 * beta);
        return t / (1 + t);
    }
    return 1 / (1 + std::exp(2 * beta));
}

int classical_gsd_exponent(const CouplingHypergraph &h) {
    return (int)h.spin_count - (int)gf2_rank(h.couplings, h.spin_count);
}

DisorderRealization flip_couplings(const DisorderRealization &d, std::span<const uint32_t> couplings) {
    DisorderRealization result = d;
    for (uint32_t c : couplings) {
        if (c >= result.eta.size()) {
            throw std::out_of_range("Coupling index " + std::to_string(c) + " out of range.");
        }
        result.eta[c] = (int8_t)-result.eta[c];
    }
    return result;
}

std::vector<uint32_t> frustrated_checks(const StabilizerCode &code, PauliType error_type, const DisorderRealization &d) {
    if (d.eta.size() != code.qubit_count) {
        throw std::invalid_argument("Disorder length does not match the code's qubit count.");
    }
    std::vector<uint32_t> result;
    const auto &checks = code.stabilizers(dual_type(error_type));
    for (uint32_t s = 0; s < checks.size(); s++) {
        int product = 1;
        for (uint32_t q : checks[s]) {
            product *= d.eta[q];
        }
        if (product < 0) {
            result.push_back(s);
        }
    }
    return result;
}

std::vector<uint32_t> stabilizer_image(const StabilizerCode &code, PauliType error_type, uint32_t stabilizer) {
    const auto &stabs = code.stabilizers(error_type);
    if (stabilizer >= stabs.size()) {
        throw std::out_of_range("Stabilizer index out of range.");
    }
    return stabs[stabilizer];
}

std::vector<uint32_t> plane_spins(const CouplingHypergraph &h, int axis, int c) {
    if (h.geometry == Geometry::kNone) {
        throw std::invalid_argument("Plane selection needs a lattice geometry.");
    }
    if (axis < 0 || axis > 2) {
        throw std::invalid_argument("Axis must be 0, 1 or 2.");
    }
    std::vector<uint32_t> result;
    for (uint32_t s = 0; s < h.spin_count; s++) {
        if (h.spin_positions[s][axis] == c) {
            result.push_back(s);
        }
    }
    return result;
}

void write_disorder_text(const DisorderRealization &d, std::ostream &out) {
    out << std::setprecision(17) << d.p << ' ' << d.seed << ' ' << d.eta.size() << '\n';
    for (int8_t e : d.eta) {
        out << (e > 0 ? "1" : "-1") << '\n';
    }
}

DisorderRealization read_disorder_text(std::istream &in) {
    DisorderRealization d;
    size_t n = 0;
    if (!(in >> d.p >> d.seed >> n)) {
        throw std::invalid_argument("Disorder file header must be 'p seed n_couplings'.");
    }
    d.eta.resize(n);
    for (size_t i = 0; i < n; i++) {
        int v = 0;
        if (!(in >> v) || (v != 1 && v != -1)) {
            throw std::invalid_argument("Disorder file entries must be +1 or -1.");
        }
        d.eta[i] = (int8_t)v;
    }
    return d;
}

namespace {

constexpr const char *kHypergraphMagic = "FRACTONLAB-HYPERGRAPH 1";

std::string_view geometry_name(Geometry g) {
    switch (g) {
        case Geometry::kCheckerboardFcc:
            return "checkerboard-fcc";
        case Geometry::kHaahFractal:
            return "haah-fractal";
        default:
            return "none";
    }
}

Geometry parse_geometry(const std::string &s) {
    if (s == "checkerboard-fcc") {
        return Geometry::kCheckerboardFcc;
    }
    if (s == "haah-fractal") {
        return Geometry::kHaahFractal;
    }
    if (s == "none") {
        return Geometry::kNone;
    }
    throw std::invalid_argument("Unknown geometry '" + s + "'.");
}

}  // namespace

void write_hypergraph_text(const CouplingHypergraph &h, std::ostream &out) {
    out << kHypergraphMagic << '\n';
    out << "geometry " << geometry_name(h.geometry) << ' ' << h.lattice_size << '\n';
    out << "spins " << h.spin_count << '\n';
    bool geo = h.geometry != Geometry::kNone;
    for (uint32_t s = 0; s < h.spin_count; s++) {
        out << s;
        if (geo) {
            out << ' ' << h.spin_positions[s][0] << ' ' << h.spin_positions[s][1] << ' ' << h.spin_positions[s][2];
        }
        out << '\n';
    }
    out << "couplings " << h.couplings.size() << '\n';
    for (size_t c = 0; c < h.couplings.size(); c++) {
        out << c;
        if (geo) {
            const auto &a = h.coupling_anchors[c];
            out << ' ' << a.site[0] << ' ' << a.site[1] << ' ' << a.site[2] << ' ' << (a.parity > 0 ? '+' : '-');
        }
        out << ' ' << h.couplings[c].size();
        for (uint32_t s : h.couplings[c]) {
            out << ' ' << s;
        }
        out << '\n';
    }
}

CouplingHypergraph read_hypergraph_text(std::istream &in) {
    std::string line;
    if (!std::getline(in, line) || line != kHypergraphMagic) {
        throw std::invalid_argument("Not a hypergraph file (missing '" + std::string(kHypergraphMagic) + "').");
    }
    CouplingHypergraph h;
    std::string word, geo_name;
    if (!(in >> word >> geo_name >> h.lattice_size) || word != "geometry") {
        throw std::invalid_argument("Hypergraph file: bad geometry line.");
    }
    h.geometry = parse_geometry(geo_name);
    bool geo = h.geometry != Geometry::kNone;
    if (!(in >> word >> h.spin_count) || word != "spins") {
        throw std::invalid_argument("Hypergraph file: bad spins line.");
    }
    if (geo) {
        h.spin_positions.resize(h.spin_count);
    }
    for (uint32_t s = 0; s < h.spin_count; s++) {
        uint32_t idx;
        if (!(in >> idx) || idx != s) {
            throw std::invalid_argument("Hypergraph file: spin lines out of order.");
        }
        if (geo && !(in >> h.spin_positions[s][0] >> h.spin_positions[s][1] >> h.spin_positions[s][2])) {
            throw std::invalid_argument("Hypergraph file: bad spin position.");
        }
    }
    size_t m = 0;
    if (!(in >> word >> m) || word != "couplings") {
        throw std::invalid_argument("Hypergraph file: bad couplings line.");
    }
    h.couplings.resize(m);
    if (geo) {
        h.coupling_anchors.resize(m);
    }
    for (size_t c = 0; c < m; c++) {
        size_t idx, k;
        if (!(in >> idx) || idx != c) {
            throw std::invalid_argument("Hypergraph file: coupling lines out of order.");
        }
        if (geo) {
            char parity;
            auto &a = h.coupling_anchors[c];
            if (!(in >> a.site[0] >> a.site[1] >> a.site[2] >> parity) || (parity != '+' && parity != '-')) {
                throw std::invalid_argument("Hypergraph file: bad coupling anchor.");
            }
            a.parity = parity == '+' ? +1 : -1;
        }
        if (!(in >> k)) {
            throw std::invalid_argument("Hypergraph file: bad coupling size.");
        }
        h.couplings[c].resize(k);
        for (auto &s : h.couplings[c]) {
            if (!(in >> s) || s >= h.spin_count) {
                throw std::invalid_argument("Hypergraph file: bad coupling spin.");
            }
        }
    }
    if (geo) {
        CubicLattice lat{h.lattice_size};
        h.spin_at_site.assign(lat.num_sites(), -1);
        for (uint32_t s = 0; s < h.spin_count; s++) {
            const auto &p = h.spin_positions[s];
            h.spin_at_site[lat.site_index(p[0], p[1], p[2])] = (int32_t)s;
        }
    }
    return h;
}

}  // namespace fractonlab
