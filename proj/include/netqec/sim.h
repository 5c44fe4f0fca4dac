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


#ifndef NETQEC_SIM_H
#define NETQEC_SIM_H

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "netqec/circuit.h"
#include "netqec/gf2.h"

namespace netqec {

/// Row-major bit matrix, rows padded to whole 64-bit words.
class BitTable {
   public:
    BitTable() = default;
    BitTable(size_t rows, size_t cols)
        : rows_(rows), cols_(cols), words_per_row_((cols + 63) / 64), data_(rows * words_per_row_, 0) {
    }

    size_t rows() const {
        return rows_;
    }
    size_t cols() const {
        return cols_;
    }
    size_t words_per_row() const {
        return words_per_row_;
    }
    bool get(size_t r, size_t c) const {
        return (data_[r * words_per_row_ + (c >> 6)] >> (c & 63)) & 1;
    }
    void flip(size_t r, size_t c) {
        data_[r * words_per_row_ + (c >> 6)] ^= uint64_t{1} << (c & 63);
    }
    void set(size_t r, size_t c, bool v) {
        if (get(r, c) != v) {
            flip(r, c);
        }
    }
    uint64_t *row(size_t r) {
        return data_.data() + r * words_per_row_;
    }
    const uint64_t *row(size_t r) const {
        return data_.data() + r * words_per_row_;
    }
    bool row_any(size_t r) const;
    /// Set column positions of one row.
    std::vector<uint32_t> row_support(size_t r) const;
    /// Appends the rows of `other` (same column count).
    void append_rows(const BitTable &other);

    bool operator==(const BitTable &other) const = default;

   private:
    size_t rows_ = 0;
    size_t cols_ = 0;
    size_t words_per_row_ = 0;
    std::vector<uint64_t> data_;
};

struct FrameSample {
    BitTable detectors;
    BitTable observables;

    size_t shots() const {
        return detectors.rows();
    }
    bool operator==(const FrameSample &other) const = default;
};

/// Pauli-frame Monte Carlo relative to the noiseless reference run. Deterministic in
/// (circuit, shots, seed) and independent of `workers`.
FrameSample frame_sample(const Circuit &circuit, size_t shots, uint64_t seed, size_t workers = 1);

/// Detector/observable signature of one fault.
struct FaultSignature {
    std::vector<uint32_t> detectors;
    uint64_t observables = 0;

    bool operator==(const FaultSignature &) const = default;
    bool operator<(const FaultSignature &other) const {
        return detectors != other.detectors ? detectors < other.detectors : observables < other.observables;
    }
};

struct DemFault {
    double probability = 0;
    FaultSignature signature;
    /// Per-qubit parts of a multi-qubit fault; empty when the fault acts on one location.
    std::vector<FaultSignature> pieces;
};

struct DetectorErrorModel {
    size_t num_detectors = 0;
    size_t num_observables = 0;
    std::vector<DemFault> faults;
    /// Coordinates attached to each detector (may be empty).
    std::vector<std::vector<double>> detector_coords;

    std::string str() const;
};

/// Enumerates every elementary fault, propagates it through the noiseless circuit and merges
/// faults with equal signatures (p + q - 2pq, capped at 1/2). Zero-signature faults are dropped.
DetectorErrorModel extract_dem(const Circuit &circuit);

/// Each fault fires independently with its prior.
FrameSample dem_sample(const DetectorErrorModel &dem, size_t shots, uint64_t seed);

struct DemMatrices {
    BinaryMatrix check;
    BinaryMatrix logical;
    std::vector<double> priors;
};
DemMatrices dem_matrices(const DetectorErrorModel &dem);

/// Binary layout: magic "NQFS", u32 version, u64 shots, u64 detectors, u64 observables, then
/// per shot the packed detector words followed by the packed observable words (little endian).
void write_sample(std::ostream &out, const FrameSample &sample);
FrameSample read_sample(std::istream &in);
/// One line per shot: detector bits, a comma, observable bits.
std::string sample_to_csv(const FrameSample &sample);

}  // namespace netqec

#endif
