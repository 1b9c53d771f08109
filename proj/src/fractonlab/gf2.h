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

#ifndef _FRACTONLAB_GF2_H
#define _FRACTONLAB_GF2_H

#include <cstddef>
#include <cstdint>
#include <vector>

namespace fractonlab {

/// Dense bit-packed GF(2) matrix used for rank computations.
class BitMatrix {
   public:
    BitMatrix(size_t num_rows, size_t num_cols);

    /// Builds the matrix whose row r has ones at the column indices in rows[r].
    static BitMatrix from_sparse_rows(const std::vector<std::vector<uint32_t>> &rows, size_t num_cols);

    void flip(size_t row, size_t col);
    bool get(size_t row, size_t col) const;
    size_t num_rows() const {
        return num_rows_;
    }
    size_t num_cols() const {
        return num_cols_;
    }

    /// Rank over GF(2). Works on a copy; the matrix is unchanged.
    size_t rank() const;

   private:
    size_t num_rows_;
    size_t num_cols_;
    size_t words_per_row_;
    std::vector<uint64_t> data_;
};

/// Rank of the sparse 0/1 matrix given by its rows.
size_t gf2_rank(const std::vector<std::vector<uint32_t>> &rows, size_t num_cols);

}  // namespace fractonlab

#endif
