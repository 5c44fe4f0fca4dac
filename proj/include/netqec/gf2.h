// Copyright 2026 The netqec Authors
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

#ifndef NETQEC_GF2_H
#define NETQEC_GF2_H

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace netqec {

/// Dense bit vector over GF(2), packed into 64-bit words.
class BitVector {
   public:
    BitVector() = default;
    explicit BitVector(size_t num_bits);

    static BitVector from_support(size_t num_bits, std::span<const uint32_t> support);

    size_t size() const {
        return num_bits_;
    }
    bool get(size_t k) const {
        return (words_[k >> 6] >> (k & 63)) & 1;
    }
    void set(size_t k, bool value = true) {
        uint64_t mask = uint64_t{1} << (k & 63);
        if (value) {
            words_[k >> 6] |= mask;
        } else {
            words_[k >> 6] &= ~mask;
        }
    }
    void flip(size_t k) {
        words_[k >> 6] ^= uint64_t{1} << (k & 63);
    }

    BitVector &operator^=(const BitVector &other);
    BitVector operator^(const BitVector &other) const;
    bool operator==(const BitVector &other) const = default;

    bool any() const;
    size_t popcount() const;
    /// Parity of the bitwise AND; the GF(2) inner product.
    bool dot(const BitVector &other) const;
    /// Index of the lowest set bit, or size() when the vector is zero.
    size_t first_set() const;
    std::vector<uint32_t> support() const;

    std::span<uint64_t> words() {
        return words_;
    }
    std::span<const uint64_t> words() const {
        return words_;
    }

   private:
    size_t num_bits_ = 0;
    std::vector<uint64_t> words_;
};

/// Sparse matrix over GF(2). Each row holds its sorted column positions.
class BinaryMatrix {
   public:
    BinaryMatrix() = default;
    BinaryMatrix(size_t rows, size_t cols);

    /// Throws std::invalid_argument on out-of-range or duplicate positions.
    static BinaryMatrix from_entries(size_t rows, size_t cols, std::span<const std::pair<uint32_t, uint32_t>> entries);
    static BinaryMatrix from_dense_rows(std::span<const BitVector> rows, size_t cols);
    static BinaryMatrix identity(size_t n);
    static BinaryMatrix hstack(const BinaryMatrix &left, const BinaryMatrix &right);
    static BinaryMatrix vstack(const BinaryMatrix &top, const BinaryMatrix &bottom);

    size_t rows() const {
        return rows_;
    }
    size_t cols() const {
        return cols_;
    }
    const std::vector<uint32_t> &row(size_t r) const {
        return row_entries_[r];
    }
    bool get(size_t r, size_t c) const;
    void toggle(size_t r, size_t c);
    void set_row(size_t r, std::vector<uint32_t> sorted_cols);

    size_t num_entries() const;
    size_t row_weight(size_t r) const {
        return row_entries_[r].size();
    }
    size_t col_weight(size_t c) const;
    std::vector<std::vector<uint32_t>> column_supports() const;
    bool is_zero() const {
        return num_entries() == 0;
    }

    BinaryMatrix transpose() const;
    BinaryMatrix operator*(const BinaryMatrix &other) const;
    BinaryMatrix operator+(const BinaryMatrix &other) const;
    bool operator==(const BinaryMatrix &other) const = default;

    /// Matrix-vector product M v.
    BitVector multiply(const BitVector &v) const;
    BitVector dense_row(size_t r) const;
    std::vector<BitVector> dense_rows() const;

    /// "H <rows> <cols>" header followed by one "row col" pair per line.
    std::string to_coordinate_text() const;
    static BinaryMatrix from_coordinate_text(std::string_view text);

   private:
    size_t rows_ = 0;
    size_t cols_ = 0;
    std::vector<std::vector<uint32_t>> row_entries_;
};

/// Reduced row echelon form computed in place. Returns pivot columns in row order.
std::vector<size_t> gf2_rref(std::vector<BitVector> &rows, size_t cols);

size_t gf2_rank(const BinaryMatrix &m);
size_t gf2_rank(std::vector<BitVector> rows, size_t cols);

/// Any x with m x = rhs, or nullopt when the system is inconsistent.
std::optional<BitVector> gf2_solve(const BinaryMatrix &m, const BitVector &rhs);

/// Basis of {v : m v = 0}, one vector per free column (lowest free column first).
std::vector<BitVector> gf2_nullspace(const BinaryMatrix &m);

}  // namespace netqec

#endif
