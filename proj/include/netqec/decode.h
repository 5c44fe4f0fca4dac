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


#ifndef NETQEC_DECODE_H
#define NETQEC_DECODE_H

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "netqec/codes.h"
#include "netqec/gf2.h"
#include "netqec/sim.h"

namespace netqec {

/// Maximum-weight matching on a general graph (not necessarily perfect). Returns mate[v]
/// or -1. Edges are (u, v, weight) with u != v.
std::vector<int> max_weight_matching(int num_vertices, const std::vector<std::tuple<int, int, int64_t>> &edges);

class Decoder {
   public:
    virtual ~Decoder() = default;
    /// Predicted observable flips for one shot, given the fired detector indices.
    virtual uint64_t decode(std::span<const uint32_t> fired) = 0;
};

/// One prediction word per shot.
std::vector<uint64_t> decode_batch(Decoder &decoder, const BitTable &detectors);

/// Detectors whose third coordinate marks checks of the given type (1 = X, 0 = Z).
std::vector<bool> basis_detectors(const DetectorErrorModel &dem, PauliBasis basis);

/// DEM over the kept detectors only, renumbered in order. Faults whose projected signatures
/// coincide are merged again and faults left with an empty signature are dropped.
DetectorErrorModel restrict_dem(const DetectorErrorModel &dem, const std::vector<bool> &keep);

/// Fired detectors of one shot, renumbered to the kept set.
std::vector<uint32_t> restrict_fired(std::span<const uint32_t> fired, const std::vector<bool> &keep);

struct MatchingEdge {
    /// Compact node ids; the boundary is node num_nodes.
    uint32_t u;
    uint32_t v;
    double probability;
    uint64_t observables;
};

/// Exact minimum-weight matching decoder with Dijkstra path distances.
class MatchingDecoder : public Decoder {
   public:
    /// Keeps only the detectors with keep[d] set (all of them when `keep` is empty). Faults
    /// whose kept part touches more than two detectors are split into their per-qubit pieces
    /// or into existing edges; otherwise construction throws "non-matchable DEM".
    explicit MatchingDecoder(const DetectorErrorModel &dem, std::vector<bool> keep = {});
    /// Keeps detectors whose third coordinate marks checks of the given type (1 = X, 0 = Z).
    static MatchingDecoder for_basis(const DetectorErrorModel &dem, PauliBasis basis);

    uint64_t decode(std::span<const uint32_t> fired) override;

    struct Result {
        uint64_t observables = 0;
        double weight = 0;
    };
    Result decode_detailed(std::span<const uint32_t> fired) const;

    size_t num_nodes() const {
        return num_nodes_;
    }
    const std::vector<MatchingEdge> &edges() const {
        return edges_;
    }
    /// Shortest-path weight between compact nodes (boundary = num_nodes()).
    double distance(uint32_t a, uint32_t b) const {
        return dist_[size_t{a} * (num_nodes_ + 1) + b];
    }

   private:
    size_t num_nodes_ = 0;
    std::vector<int32_t> compact_;
    std::vector<MatchingEdge> edges_;
    std::vector<double> dist_;
    std::vector<uint64_t> path_obs_;
};

enum class BpMethod {
    kMinSum,
    /// Exact tanh-rule check updates.
    kProductSum,
};

struct BpOsdConfig {
    BpMethod method = BpMethod::kMinSum;
    size_t max_iterations = 30;
    /// Min-sum only.
    double scaling = 0.625;
    size_t osd_order = 0;
};

/// Belief propagation (min-sum or product-sum, flooding schedule) with ordered-statistics
/// post-processing.
class BpOsdDecoder : public Decoder {
   public:
    BpOsdDecoder(BinaryMatrix check, std::vector<double> priors, BinaryMatrix logical, BpOsdConfig config = {});
    static std::unique_ptr<BpOsdDecoder> from_dem(const DetectorErrorModel &dem, BpOsdConfig config = {});

    uint64_t decode(std::span<const uint32_t> fired) override;

    /// Fault estimate reproducing `syndrome`; throws if the syndrome is outside the column space.
    BitVector decode_syndrome(const BitVector &syndrome);

    /// How many of the decoded shots needed OSD.
    size_t osd_invocations() const {
        return osd_invocations_;
    }
    size_t decodes() const {
        return decodes_;
    }

   private:
    bool run_bp(const BitVector &syndrome);
    void product_sum_row(size_t lo, size_t hi, bool syndrome_bit);
    BitVector run_osd(const BitVector &syndrome);

    BinaryMatrix check_;
    BinaryMatrix logical_;
    std::vector<double> channel_llr_;
    BpOsdConfig config_;
    std::vector<std::vector<uint32_t>> col_rows_;
    std::vector<BitVector> columns_;
    // Edge-indexed message storage: one entry per nonzero, laid out by rows.
    std::vector<size_t> row_start_;
    std::vector<uint32_t> edge_col_;
    std::vector<std::vector<size_t>> col_edges_;
    std::vector<double> c2v_, v2c_, posterior_, scratch_;
    BitVector hard_;
    size_t osd_invocations_ = 0;
    size_t decodes_ = 0;
};

struct ErrorRate {
    size_t shots = 0;
    size_t failures = 0;
    double rate = 0;
    double ci_lo = 0;
    double ci_hi = 0;
};

/// Wilson score interval (95% by default).
std::pair<double, double> wilson_interval(size_t failures, size_t shots, double z = 1.959963984540054);

/// A shot fails when any observable bit differs.
ErrorRate logical_error_rate(const std::vector<uint64_t> &predictions, const BitTable &observables);

}  // namespace netqec

#endif
