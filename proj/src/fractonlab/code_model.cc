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

#include "fractonlab/code_model.h"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "fractonlab/gf2.h"

namespace fractonlab {

namespace {

struct SupportEntry {
    int dx, dy, dz;
    int family;
};

// Haah's cubic code, relative to the cube corner v.
constexpr SupportEntry kHaahX[8] = {
    {1, 1, 0, 1},
    {1, 0, 1, 1},
    {0, 1, 1, 1},
    {1, 1, 1, 1},
    {1, 0, 0, 2},
    {0, 1, 0, 2},
    {0, 0, 1, 2},
    {1, 1, 1, 2},
};
constexpr SupportEntry kHaahZ[8] = {
    {0, 0, 0, 1},
    {1, 1, 0, 1},
    {1, 0, 1, 1},
    {0, 1, 1, 1},
    {0, 0, 0, 2},
    {1, 0, 0, 2},
    {0, 1, 0, 2},
    {0, 0, 1, 2},
};

std::vector<uint32_t> sorted_unique(std::vector<uint32_t> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

}  // namespace

std::string_view code_kind_name(CodeKind kind) {
    return kind == CodeKind::kCheckerboard ? "checkerboard" : "haah";
}

CodeKind parse_code_kind(std::string_view text) {
    if (text == "checkerboard") {
        return CodeKind::kCheckerboard;
    }
    if (text == "haah") {
        return CodeKind::kHaah;
    }
    throw std::invalid_argument("Unknown code '" + std::string(text) + "' (expected checkerboard or haah).");
}

std::string_view pauli_type_name(PauliType type) {
    return type == PauliType::kX ? "X" : "Z";
}

PauliType parse_pauli_type(std::string_view text) {
    if (text == "X" || text == "x") {
        return PauliType::kX;
    }
    if (text == "Z" || text == "z") {
        return PauliType::kZ;
    }
    throw std::invalid_argument("Unknown sector '" + std::string(text) + "' (expected X or Z).");
}

PauliType dual_type(PauliType type) {
    return type == PauliType::kX ? PauliType::kZ : PauliType::kX;
}

uint32_t StabilizerCode::qubit_index(int x, int y, int z, int family) const {
    uint32_t site = lattice().site_index(x, y, z);
    return families == 1 ? site : 2 * site + (uint32_t)(family - 1);
}

std::vector<std::vector<uint32_t>> StabilizerCode::qubit_incidence(PauliType type) const {
    std::vector<std::vector<uint32_t>> result(qubit_count);
    const auto &stabs = stabilizers(type);
    for (uint32_t s = 0; s < stabs.size(); s++) {
        for (uint32_t q : stabs[s]) {
            result[q].push_back(s);
        }
    }
    return result;
}

StabilizerCode build_checkerboard(int L) {
    if (L < 2 || L % 2 != 0) {
        throw std::invalid_argument(
            "Checkerboard code requires an even lattice size L >= 2 (got " + std::to_string(L) + ").");
    }
    StabilizerCode code;
    code.kind = CodeKind::kCheckerboard;
    code.lattice_size = L;
    code.families = 1;
    CubicLattice lat{L};
    code.qubit_count = (uint32_t)lat.num_sites();
    code.site_coordinates.resize(code.qubit_count);
    for (uint32_t s = 0; s < code.qubit_count; s++) {
        auto [x, y, z] = lat.coords(s);
        code.site_coordinates[s] = {x, y, z, 1};
    }
    for (int z = 0; z < L; z++) {
        for (int y = 0; y < L; y++) {
            for (int x = 0; x < L; x++) {
                if ((x + y + z) % 2 != 0) {
                    continue;
                }
                std::vector<uint32_t> support;
                for (int d = 0; d < 8; d++) {
                    support.push_back(lat.site_index(x + (d & 1), y + ((d >> 1) & 1), z + ((d >> 2) & 1)));
                }
                support = sorted_unique(std::move(support));
                if (support.size() != 8) {
                    throw std::logic_error("Checkerboard cube support does not have 8 distinct vertices.");
                }
                code.x_stabilizers.push_back(support);
                code.z_stabilizers.push_back(std::move(support));
                code.stabilizer_anchors.push_back({x, y, z});
            }
        }
    }
    return code;
}

StabilizerCode build_haah(int L) {
    if (L < 2) {
        throw std::invalid_argument("Haah's code requires lattice size L >= 2 (got " + std::to_string(L) + ").");
    }
    StabilizerCode code;
    code.kind = CodeKind::kHaah;
    code.lattice_size = L;
    code.families = 2;
    CubicLattice lat{L};
    code.qubit_count = (uint32_t)(2 * lat.num_sites());
    code.site_coordinates.resize(code.qubit_count);
    for (uint32_t s = 0; s < lat.num_sites(); s++) {
        auto [x, y, z] = lat.coords(s);
        code.site_coordinates[2 * s] = {x, y, z, 1};
        code.site_coordinates[2 * s + 1] = {x, y, z, 2};
    }
    auto make_support = [&](const SupportEntry(&entries)[8], int x, int y, int z) {
        std::vector<uint32_t> support;
        for (const auto &e : entries) {
            support.push_back(code.qubit_index(x + e.dx, y + e.dy, z + e.dz, e.family));
        }
        support = sorted_unique(std::move(support));
        if (support.size() != 8) {
            throw std::logic_error("Haah stabilizer support does not have 8 distinct qubits.");
        }
        return support;
    };
    for (int z = 0; z < L; z++) {
        for (int y = 0; y < L; y++) {
            for (int x = 0; x < L; x++) {
                code.x_stabilizers.push_back(make_support(kHaahX, x, y, z));
                code.z_stabilizers.push_back(make_support(kHaahZ, x, y, z));
                code.stabilizer_anchors.push_back({x, y, z});
            }
        }
    }
    return code;
}

Syndrome syndrome(const StabilizerCode &code, const ErrorConfig &error) {
    std::vector<uint8_t> flipped(code.qubit_count, 0);
    for (uint32_t q : error.flipped_qubits) {
        if (q >= code.qubit_count) {
            throw std::out_of_range("Error qubit index " + std::to_string(q) + " out of range.");
        }
        flipped[q] ^= 1;
    }
    Syndrome result;
    const auto &checks = code.stabilizers(dual_type(error.sector));
    for (uint32_t s = 0; s < checks.size(); s++) {
        uint8_t parity = 0;
        for (uint32_t q : checks[s]) {
            parity ^= flipped[q];
        }
        if (parity) {
            result.violated.push_back(s);
        }
    }
    return result;
}

int logical_qubit_count(const StabilizerCode &code) {
    size_t rx = gf2_rank(code.x_stabilizers, code.qubit_count);
    size_t rz = gf2_rank(code.z_stabilizers, code.qubit_count);
    return (int)code.qubit_count - (int)rx - (int)rz;
}

bool stabilizers_commute(const StabilizerCode &code) {
    auto z_of_qubit = code.qubit_incidence(PauliType::kZ);
    std::vector<uint32_t> overlap(code.z_stabilizers.size(), 0);
    for (const auto &xs : code.x_stabilizers) {
        std::vector<uint32_t> touched;
        for (uint32_t q : xs) {
            for (uint32_t zs : z_of_qubit[q]) {
                if (overlap[zs]++ == 0) {
                    touched.push_back(zs);
                }
            }
        }
        bool ok = true;
        for (uint32_t zs : touched) {
            ok &= overlap[zs] % 2 == 0;
            overlap[zs] = 0;
        }
        if (!ok) {
            return false;
        }
    }
    return true;
}

void write_parity_text(const StabilizerCode &code, std::ostream &out) {
    out << code.qubit_count << ' ' << code.x_stabilizers.size() << ' ' << code.z_stabilizers.size() << '\n';
    for (const auto *group : {&code.x_stabilizers, &code.z_stabilizers}) {
        for (const auto &support : *group) {
            auto sorted = sorted_unique(support);
            for (size_t k = 0; k < sorted.size(); k++) {
                out << (k ? " " : "") << sorted[k];
            }
            out << '\n';
        }
    }
}

ParityText read_parity_text(std::istream &in) {
    ParityText result;
    size_t mx = 0, mz = 0;
    std::string line;
    if (!std::getline(in, line)) {
        throw std::invalid_argument("Parity file is empty.");
    }
    std::istringstream header(line);
    if (!(header >> result.qubit_count >> mx >> mz)) {
        throw std::invalid_argument("Parity file header must be 'n m_x m_z'.");
    }
    auto read_rows = [&](size_t count, std::vector<std::vector<uint32_t>> &rows) {
        for (size_t r = 0; r < count; r++) {
            if (!std::getline(in, line)) {
                throw std::invalid_argument("Parity file ended early.");
            }
            std::istringstream ss(line);
            std::vector<uint32_t> row;
            uint32_t q;
            while (ss >> q) {
                if (q >= result.qubit_count) {
                    throw std::invalid_argument("Parity file qubit index out of range.");
                }
                row.push_back(q);
            }
            rows.push_back(std::move(row));
        }
    };
    read_rows(mx, result.x_stabilizers);
    read_rows(mz, result.z_stabilizers);
    return result;
}

}  // namespace fractonlab
