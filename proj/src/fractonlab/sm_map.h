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

#ifndef _FRACTONLAB_SM_MAP_H
#define _FRACTONLAB_SM_MAP_H

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "fractonlab/code_model.h"

namespace fractonlab {

/// Lattice layout of a hypergraph, used by geometry-aware observables.
enum class Geometry {
    kNone,
    /// Spins on the even sublattice of a cubic lattice, up (+) and down (-)
    /// tetrahedra anchored at each spin.
    kCheckerboardFcc,
    /// Spins on every site, two tetrahedron types per site.
    kHaahFractal,
};

/// Anchor of a coupling: a spin site plus the tetrahedron orientation.
///
/// Checkerboard: + is {v, v+x+y, v+y+z, v+x+z}, - is {v, v-x-y, v-y-z, v-x-z}.
/// Haah X sector: + is {v, v+x, v+y, v+z}, - is {v, v+x+y, v+y+z, v+x+z}.
/// Haah Z sector: the spatial inversion of the X sector tetrahedra.
struct CouplingAnchor {
    std::array<int, 3> site{0, 0, 0};
    int parity = +1;

    bool operator==(const CouplingAnchor &other) const = default;
};

/// Disordered multi-spin Ising model H = -sum_c eta_c prod_{i in c} sigma_i.
///
/// Couplings mapped from a code are indexed like the qubits they come from.
struct CouplingHypergraph {
    uint32_t spin_count = 0;
    std::vector<std::vector<uint32_t>> couplings;

    Geometry geometry = Geometry::kNone;
    int lattice_size = 0;
    std::vector<std::array<int, 3>> spin_positions;
    std::vector<CouplingAnchor> coupling_anchors;
    /// Cubic-lattice site index -> spin index, or -1 when no spin sits there.
    std::vector<int32_t> spin_at_site;

    size_t coupling_count() const {
        return couplings.size();
    }
    int32_t spin_at(int x, int y, int z) const;
    bool operator==(const CouplingHypergraph &other) const = default;
};

/// Per-coupling signs eta in {+1, -1}.
struct DisorderRealization {
    std::vector<int8_t> eta;
    double p = 0;
    uint64_t seed = 0;
    bool operator==(const DisorderRealization &other) const = default;
};

/// Maps independent `error_type` noise on the code onto a coupling hypergraph.
///
/// One spin per stabilizer of the same Pauli type as the error (so multiplying
/// an error by a stabilizer is a gauge transformation); one coupling per qubit
/// over the stabilizers sharing it. Frustration of the couplings is measured by
/// the stabilizers of the dual type, which is the syndrome.
CouplingHypergraph map_error_model(const StabilizerCode &code, PauliType error_type);

/// Hypergraph without lattice geometry.
CouplingHypergraph make_hypergraph(uint32_t spin_count, std::vector<std::vector<uint32_t>> couplings);

/// Random hypergraph with `coupling_count` distinct k-body couplings on
/// `spin_count` spins, every spin covered at least once when possible.
CouplingHypergraph random_hypergraph(uint32_t spin_count, uint32_t coupling_count, uint32_t body, uint64_t seed);

DisorderRealization clean_disorder(const CouplingHypergraph &h);

/// Each eta independently -1 with probability p. The draw depends only on
/// (seed, realization_index).
DisorderRealization sample_disorder(
    const CouplingHypergraph &h, double p, uint64_t seed, uint64_t realization_index = 0);

/// E = -sum_c eta_c prod_{i in c} sigma_i, exact.
int64_t energy(const CouplingHypergraph &h, const DisorderRealization &d, std::span<const int8_t> spins);

/// Inverse temperature on the Nishimori line, e^{-2 beta} = p / (1 - p).
/// Returns +infinity at p = 0 and -infinity at p = 1.
double nishimori_beta(double p);
/// Inverse of nishimori_beta: p = 1 / (1 + e^{2 beta}).
double nishimori_p(double beta);

/// g with clean ground-state degeneracy 2^g = 2^{N_s - rank(incidence)}.
int classical_gsd_exponent(const CouplingHypergraph &h);

/// Copy of d with eta negated on the listed couplings.
DisorderRealization flip_couplings(const DisorderRealization &d, std::span<const uint32_t> couplings);

/// Dual-type stabilizers whose support carries an odd number of -1 couplings.
std::vector<uint32_t> frustrated_checks(const StabilizerCode &code, PauliType error_type, const DisorderRealization &d);

/// Couplings flipped by multiplying the error with same-type stabilizer s
/// (its support). Equivalent to flipping spin s.
std::vector<uint32_t> stabilizer_image(const StabilizerCode &code, PauliType error_type, uint32_t stabilizer);

/// Spins of a checkerboard or Haah hypergraph with coordinate `axis` equal to c.
std::vector<uint32_t> plane_spins(const CouplingHypergraph &h, int axis, int c);

/// "p seed n_couplings" header then one sign per line.
void write_disorder_text(const DisorderRealization &d, std::ostream &out);
DisorderRealization read_disorder_text(std::istream &in);

/// Text dump of a hypergraph with its geometry tags; see docs/formats.md.
void write_hypergraph_text(const CouplingHypergraph &h, std::ostream &out);
CouplingHypergraph read_hypergraph_text(std::istream &in);

}  // namespace fractonlab

#endif
