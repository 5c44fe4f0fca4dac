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

#include "netqec/gf2.h"

#include <algorithm>
#include <bit>
#include <sstream>
#include <stdexcept>

namespace netqec {

BitVector::BitVector(size_t num_bits) : num_bits_(num_bits), words_((num_bits + 63) / 64, 0) {
}

BitVector BitVector::from_support(size_t num_bits, std::span<const uint32_t> support) {
    BitVector v(num_bits);
    for (auto k : support) {
        if (k >= num_bits) {
            throw std::out_of_range("support index out of range");
        }
        v.flip(k);
    }
    return v;
}

BitVector &BitVector::operator^=(const BitVector &other) {
    if (other.num_bits_ != num_bits_) {
        throw std::invalid_argument("BitVector size mismatch");
    }
    for (size_t w = 0; w < words_.size(); w++) {
        words_[w] ^= other.words_[w];
    }
    return *this;
}

BitVector BitVector::operator^(const BitVector &other) const {
    BitVector result = *this;
    result ^= other;
    return result;
}

bool BitVector::any() const {
    for (auto w : words_) {
        if (w) {
            return true;
        }
    }
    return false;
}

size_t BitVector::popcount() const {
    size_t total = 0;
    for (auto w : words_) {
        total += std::popcount(w);
    }
    return total;
}

bool BitVector::dot(const BitVector &other) const {
    uint64_t acc = 0;
    size_t n = std::min(words_.size(), other.words_.size());
    for (size_t w = 0; w < n; w++) {
        acc ^= words_[w] & other.words_[w];
    }
    return std::popcount(acc) & 1;
}

size_t BitVector::first_set() const {
    for (size_t w = 0; w < words_.size(); w++) {
        if (words_[w]) {
            return w * 64 + std::countr_zero(words_[w]);
        }
    }
    return num_bits_;
}

std::vector<uint32_t> BitVector::support() const {
    std::vector<uint32_t> result;
    for (size_t w = 0; w < words_.size(); w++) {
        uint64_t bits = words_[w];
        while (bits) {
            result.push_back(static_cast<uint32_t>(w * 64 + std::countr_zero(bits)));
            bits &= bits - 1;
        }
    }
    return result;
}

BinaryMatrix::BinaryMatrix(size_t rows, size_t cols) : rows_(rows), cols_(cols), row_entries_(rows) {
}

BinaryMatrix BinaryMatrix::from_entries(
    size_t rows, size_t cols, std::span<const std::pair<uint32_t, uint32_t>> entries) {
    BinaryMatrix m(rows, cols);
    for (auto [r, c] : entries) {
        if (r >= rows || c >= cols) {
            throw std::invalid_argument(
                "entry (" + std::to_string(r) + ", " + std::to_string(c) + ") outside " + std::to_string(rows) + "x" +
                std::to_string(cols) + " matrix");
        }
        m.row_entries_[r].push_back(c);
    }
    for (size_t r = 0; r < rows; r++) {
        auto &row = m.row_entries_[r];
        std::sort(row.begin(), row.end());
        if (std::adjacent_find(row.begin(), row.end()) != row.end()) {
            throw std::invalid_argument("duplicate entry in row " + std::to_string(r));
        }
    }
    return m;
}

BinaryMatrix BinaryMatrix::from_dense_rows(std::span<const BitVector> rows, size_t cols) {
    BinaryMatrix m(rows.size(), cols);
    for (size_t r = 0; r < rows.size(); r++) {
        if (rows[r].size() != cols) {
            throw std::invalid_argument("dense row width mismatch");
        }
        m.row_entries_[r] = rows[r].support();
    }
    return m;
}

BinaryMatrix BinaryMatrix::identity(size_t n) {
    BinaryMatrix m(n, n);
    for (size_t k = 0; k < n; k++) {
        m.row_entries_[k].push_back(static_cast<uint32_t>(k));
    }
    return m;
}

BinaryMatrix BinaryMatrix::hstack(const BinaryMatrix &left, const BinaryMatrix &right) {
    if (left.rows_ != right.rows_) {
        throw std::invalid_argument("hstack row mismatch");
    }
    BinaryMatrix m(left.rows_, left.cols_ + right.cols_);
    for (size_t r = 0; r < left.rows_; r++) {
        auto &row = m.row_entries_[r];
        row = left.row_entries_[r];
        for (auto c : right.row_entries_[r]) {
            row.push_back(static_cast<uint32_t>(c + left.cols_));
        }
    }
    return m;
}

BinaryMatrix BinaryMatrix::vstack(const BinaryMatrix &top, const BinaryMatrix &bottom) {
    if (top.cols_ != bottom.cols_) {
        throw std::invalid_argument("vstack column mismatch");
    }
    BinaryMatrix m(top.rows_ + bottom.rows_, top.cols_);
    std::copy(top.row_entries_.begin(), top.row_entries_.end(), m.row_entries_.begin());
    std::copy(bottom.row_entries_.begin(), bottom.row_entries_.end(), m.row_entries_.begin() + top.rows_);
    return m;
}

bool BinaryMatrix::get(size_t r, size_t c) const {
    const auto &row = row_entries_.at(r);
    return std::binary_search(row.begin(), row.end(), static_cast<uint32_t>(c));
}

void BinaryMatrix::toggle(size_t r, size_t c) {
    if (r >= rows_ || c >= cols_) {
        throw std::out_of_range("toggle outside matrix");
    }
    auto &row = row_entries_[r];
    auto it = std::lower_bound(row.begin(), row.end(), static_cast<uint32_t>(c));
    if (it != row.end() && *it == c) {
        row.erase(it);
    } else {
        row.insert(it, static_cast<uint32_t>(c));
    }
}

void BinaryMatrix::set_row(size_t r, std::vector<uint32_t> sorted_cols) {
    for (size_t k = 0; k < sorted_cols.size(); k++) {
        if (sorted_cols[k] >= cols_ || (k > 0 && sorted_cols[k] <= sorted_cols[k - 1])) {
            throw std::invalid_argument("row entries must be sorted, unique and in range");
        }
    }
    row_entries_.at(r) = std::move(sorted_cols);
}

size_t BinaryMatrix::num_entries() const {
    size_t total = 0;
    for (const auto &row : row_entries_) {
        total += row.size();
    }
    return total;
}

size_t BinaryMatrix::col_weight(size_t c) const {
    size_t total = 0;
    for (size_t r = 0; r < rows_; r++) {
        total += get(r, c);
    }
    return total;
}

std::vector<std::vector<uint32_t>> BinaryMatrix::column_supports() const {
    std::vector<std::vector<uint32_t>> cols(cols_);
    for (size_t r = 0; r < rows_; r++) {
        for (auto c : row_entries_[r]) {
            cols[c].push_back(static_cast<uint32_t>(r));
        }
    }
    return cols;
}

BinaryMatrix BinaryMatrix::transpose() const {
    BinaryMatrix t(cols_, rows_);
    t.row_entries_ = column_supports();
    return t;
}

BinaryMatrix BinaryMatrix::operator*(const BinaryMatrix &other) const {
    if (cols_ != other.rows_) {
        throw std::invalid_argument("product dimension mismatch");
    }
    BinaryMatrix result(rows_, other.cols_);
    BitVector acc(other.cols_);
    for (size_t r = 0; r < rows_; r++) {
        std::fill(acc.words().begin(), acc.words().end(), 0);
        for (auto k : row_entries_[r]) {
            for (auto c : other.row_entries_[k]) {
                acc.flip(c);
            }
        }
        result.row_entries_[r] = acc.support();
    }
    return result;
}

BinaryMatrix BinaryMatrix::operator+(const BinaryMatrix &other) const {
    if (rows_ != other.rows_ || cols_ != other.cols_) {
        throw std::invalid_argument("sum dimension mismatch");
    }
    BinaryMatrix result(rows_, cols_);
    for (size_t r = 0; r < rows_; r++) {
        auto &out = result.row_entries_[r];
        std::set_symmetric_difference(
            row_entries_[r].begin(),
            row_entries_[r].end(),
            other.row_entries_[r].begin(),
            other.row_entries_[r].end(),
            std::back_inserter(out));
    }
    return result;
}

BitVector BinaryMatrix::multiply(const BitVector &v) const {
    if (v.size() != cols_) {
        throw std::invalid_argument("vector length does not match matrix columns");
    }
    BitVector out(rows_);
    for (size_t r = 0; r < rows_; r++) {
        bool parity = false;
        for (auto c : row_entries_[r]) {
            parity ^= v.get(c);
        }
        if (parity) {
            out.set(r);
        }
    }
    return out;
}

BitVector BinaryMatrix::dense_row(size_t r) const {
    return BitVector::from_support(cols_, row_entries_.at(r));
}

std::vector<BitVector> BinaryMatrix::dense_rows() const {
    std::vector<BitVector> rows;
    rows.reserve(rows_);
    for (size_t r = 0; r < rows_; r++) {
        rows.push_back(dense_row(r));
    }
    return rows;
}

std::string BinaryMatrix::to_coordinate_text() const {
    std::ostringstream out;
    out << "H " << rows_ << " " << cols_ << "\n";
    for (size_t r = 0; r < rows_; r++) {
        for (auto c : row_entries_[r]) {
            out << r << " " << c << "\n";
        }
    }
    return out.str();
}

BinaryMatrix BinaryMatrix::from_coordinate_text(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string tag;
    size_t rows = 0;
    size_t cols = 0;
    if (!(in >> tag >> rows >> cols) || tag != "H") {
        throw std::invalid_argument("coordinate text must start with 'H <rows> <cols>'");
    }
    std::vector<std::pair<uint32_t, uint32_t>> entries;
    uint64_t r = 0;
    uint64_t c = 0;
    while (in >> r) {
        if (!(in >> c)) {
            throw std::invalid_argument("dangling row index in coordinate text");
        }
        entries.emplace_back(static_cast<uint32_t>(r), static_cast<uint32_t>(c));
    }
    if (!in.eof()) {
        throw std::invalid_argument("malformed coordinate text");
    }
    return from_entries(rows, cols, entries);
}

std::vector<size_t> gf2_rref(std::vector<BitVector> &rows, size_t cols) {
    std::vector<size_t> pivots;
    size_t next_row = 0;
    for (size_t c = 0; c < cols && next_row < rows.size(); c++) {
        size_t found = next_row;
        while (found < rows.size() && !rows[found].get(c)) {
            found++;
        }
        if (found == rows.size()) {
            continue;
        }
        std::swap(rows[found], rows[next_row]);
        for (size_t r = 0; r < rows.size(); r++) {
            if (r != next_row && rows[r].get(c)) {
                rows[r] ^= rows[next_row];
            }
        }
        pivots.push_back(c);
        next_row++;
    }
    return pivots;
}

size_t gf2_rank(std::vector<BitVector> rows, size_t cols) {
    return gf2_rref(rows, cols).size();
}

size_t gf2_rank(const BinaryMatrix &m) {
    return gf2_rank(m.dense_rows(), m.cols());
}

std::optional<BitVector> gf2_solve(const BinaryMatrix &m, const BitVector &rhs) {
    if (rhs.size() != m.rows()) {
        throw std::invalid_argument("right-hand side length does not match matrix rows");
    }
    // Augment each row with its rhs bit in the last column.
    std::vector<BitVector> rows;
    rows.reserve(m.rows());
    for (size_t r = 0; r < m.rows(); r++) {
        BitVector row(m.cols() + 1);
        for (auto c : m.row(r)) {
            row.set(c);
        }
        row.set(m.cols(), rhs.get(r));
        rows.push_back(std::move(row));
    }
    auto pivots = gf2_rref(rows, m.cols() + 1);
    BitVector x(m.cols());
    for (size_t k = 0; k < pivots.size(); k++) {
        if (pivots[k] == m.cols()) {
            return std::nullopt;
        }
        x.set(pivots[k], rows[k].get(m.cols()));
    }
    return x;
}

std::vector<BitVector> gf2_nullspace(const BinaryMatrix &m) {
    auto rows = m.dense_rows();
    auto pivots = gf2_rref(rows, m.cols());
    std::vector<bool> is_pivot(m.cols(), false);
    for (auto p : pivots) {
        is_pivot[p] = true;
    }
    std::vector<BitVector> basis;
    for (size_t free = 0; free < m.cols(); free++) {
        if (is_pivot[free]) {
            continue;
        }
        BitVector v(m.cols());
        v.set(free);
        for (size_t k = 0; k < pivots.size(); k++) {
            if (rows[k].get(free)) {
                v.set(pivots[k]);
            }
        }
        basis.push_back(std::move(v));
    }
    return basis;
}

}  // namespace netqec
