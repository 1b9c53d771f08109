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

#ifndef _FRACTONLAB_CODE_MODEL_H
#define _FRACTONLAB_CODE_MODEL_H

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace fractonlab {

enum class CodeKind { kCheckerboard, kHaah };

/// Pauli type of an error (and of the stabilizers of the same type).
enum class PauliType { kX, kZ };

std::string_view code_kind_name(CodeKind kind);
CodeKind parse_code_kind(std::string_view text);
std::string_view pauli_type_name(PauliType type);
PauliType parse_pauli_type(std::string_view text);
PauliType dual_type(PauliType type);

/// A lattice site (x, y, z) carrying qubit family 1 or 2.
struct SiteCoord {
    int x = 0;
    int y = 0;
    int z = 0;
    int family = 1;
    bool operator==(const SiteCoord &other) const = default;
};

/// Periodic cubic lattice of side L. Site index order is (z, y, x).
struct CubicLattice {
    int size = 0;

    size_t num_sites() const {
        return (size_t)size * size * size;
    }
    int wrap(int c) const {
        int m = c % size;
        return m < 0 ? m + size : m;
    }
    uint32_t site_index(int x, int y, int z) const {
        return (uint32_t)(((size_t)wrap(z) * size + wrap(y)) * size + wrap(x));
    }
    std::array<int, 3> coords(uint32_t site) const {
        int x = (int)(site % size);
        int y = (int)((site / size) % size);
        int z = (int)(site / ((size_t)size * size));
        return {x, y, z};
    }
};

/// CSS stabilizer code on a periodic cubic lattice.
///
/// Qubits and stabilizers are indexed lexicographically in (z, y, x, family).
/// Each stabilizer is anchored at the (0,0,0) corner of its cube.
struct StabilizerCode {
    CodeKind kind = CodeKind::kCheckerboard;
    int lattice_size = 0;
    uint32_t qubit_count = 0;
    int families = 1;
    std::vector<std::vector<uint32_t>> x_stabilizers;
    std::vector<std::vector<uint32_t>> z_stabilizers;
    std::vector<SiteCoord> site_coordinates;
    /// Cube corner of each stabilizer (same for both types).
    std::vector<std::array<int, 3>> stabilizer_anchors;

    CubicLattice lattice() const {
        return CubicLattice{lattice_size};
    }
    const std::vector<std::vector<uint32_t>> &stabilizers(PauliType type) const {
        return type == PauliType::kX ? x_stabilizers : z_stabilizers;
    }
    uint32_t qubit_index(int x, int y, int z, int family) const;

    /// Stabilizers of `type` whose support contains each qubit.
    std::vector<std::vector<uint32_t>> qubit_incidence(PauliType type) const;
};

struct ErrorConfig {
    std::vector<uint32_t> flipped_qubits;
    PauliType sector = PauliType::kX;
};

/// Violated stabilizer indices (of the type dual to the error), sorted.
struct Syndrome {
    std::vector<uint32_t> violated;
    bool operator==(const Syndrome &other) const = default;
};

/// Checkerboard code: stabilizer pairs on cubes whose corner has even x+y+z.
/// Requires even L >= 2.
StabilizerCode build_checkerboard(int L);

/// Haah's cubic code with two qubits per site, one X and one Z stabilizer
/// per cube. Requires L >= 2.
///
/// Supports, as (corner offset, family) relative to the cube corner v:
///   X: (xy,1) (zx,1) (zy,1) (xyz,1) (x,2) (y,2) (z,2) (xyz,2)
///   Z: (0,1) (xy,1) (zx,1) (zy,1) (0,2) (x,2) (y,2) (z,2)
StabilizerCode build_haah(int L);

Syndrome syndrome(const StabilizerCode &code, const ErrorConfig &error);

/// k = n - rank(H_X) - rank(H_Z) over GF(2).
int logical_qubit_count(const StabilizerCode &code);

/// True iff every X support meets every Z support in an even number of qubits.
bool stabilizers_commute(const StabilizerCode &code);

/// Writes "n m_x m_z" then one line of sorted qubit indices per stabilizer
/// (X stabilizers first).
void write_parity_text(const StabilizerCode &code, std::ostream &out);

struct ParityText {
    uint32_t qubit_count = 0;
    std::vector<std::vector<uint32_t>> x_stabilizers;
    std::vector<std::vector<uint32_t>> z_stabilizers;
};
ParityText read_parity_text(std::istream &in);

}  // namespace fractonlab

#endif
