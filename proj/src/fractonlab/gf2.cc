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

#include "fractonlab/gf2.h"

#include <stdexcept>

namespace fractonlab {

BitMatrix::BitMatrix(size_t num_rows, size_t num_cols)
    : num_rows_(num_rows),
      num_cols_(num_cols),
      words_per_row_((num_cols + 63) / 64),
      data_(num_rows * ((num_cols + 63) / 64), 0) {
}

BitMatrix BitMatrix::from_sparse_rows(const std::vector<std::vector<uint32_t>> &rows, size_t num_cols) {
    BitMatrix m(rows.size(), num_cols);
    for (size_t r = 0; r < rows.size(); r++) {
        for (uint32_t c : rows[r]) {
            if (c >= num_cols) {
                throw std::out_of_range("BitMatrix column index out of range.");
            }
            m.flip(r, c);
        }
    }
    return m;
}

void BitMatrix::flip(size_t row, size_t col) {
    data_[row * words_per_row_ + col / 64] ^= uint64_t{1} << (col % 64);
}

bool BitMatrix::get(size_t row, size_t col) const {
    return (data_[row * words_per_row_ + col / 64] >> (col % 64)) & 1;
}

size_t BitMatrix::rank() const {
    std::vector<uint64_t> m = data_;
    size_t w = words_per_row_;
    size_t rank = 0;
    for (size_t col = 0; col < num_cols_ && rank < num_rows_; col++) {
        size_t word = col / 64;
        uint64_t bit = uint64_t{1} << (col % 64);
        size_t pivot = rank;
        while (pivot < num_rows_ && !(m[pivot * w + word] & bit)) {
            pivot++;
        }
        if (pivot == num_rows_) {
            continue;
        }
        if (pivot != rank) {
            for (size_t k = word; k < w; k++) {
                std::swap(m[pivot * w + k], m[rank * w + k]);
            }
        }
        // Columns left of `col` are already zero below the pivot rows.
        const uint64_t *prow = &m[rank * w];
        for (size_t r = rank + 1; r < num_rows_; r++) {
            uint64_t *row = &m[r * w];
            if (row[word] & bit) {
                for (size_t k = word; k < w; k++) {
                    row[k] ^= prow[k];
                }
            }
        }
        rank++;
    }
    return rank;
}

size_t gf2_rank(const std::vector<std::vector<uint32_t>> &rows, size_t num_cols) {
    // Eliminating along the shorter dimension is cheaper; rank(M) = rank(M^T).
    if (rows.size() > num_cols) {
        std::vector<std::vector<uint32_t>> transposed(num_cols);
        for (size_t r = 0; r < rows.size(); r++) {
            for (uint32_t c : rows[r]) {
                transposed[c].push_back((uint32_t)r);
            }
        }
        return BitMatrix::from_sparse_rows(transposed, rows.size()).rank();
    }
    return BitMatrix::from_sparse_rows(rows, num_cols).rank();
}

}  // namespace fractonlab
