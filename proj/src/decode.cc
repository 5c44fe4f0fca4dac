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


#include "netqec/decode.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <queue>
#include <stdexcept>

namespace netqec {

std::vector<uint64_t> decode_batch(Decoder &decoder, const BitTable &detectors) {
    std::vector<uint64_t> out(detectors.rows());
    for (size_t s = 0; s < detectors.rows(); s++) {
        auto fired = detectors.row_support(s);
        out[s] = decoder.decode(fired);
    }
    return out;
}

std::vector<bool> basis_detectors(const DetectorErrorModel &dem, PauliBasis basis) {
    double flag = basis == PauliBasis::X ? 1.0 : 0.0;
    std::vector<bool> keep(dem.num_detectors, false);
    for (size_t d = 0; d < dem.num_detectors && d < dem.detector_coords.size(); d++) {
        if (dem.detector_coords[d].size() >= 3) {
            keep[d] = dem.detector_coords[d][2] == flag;
        }
    }
    return keep;
}

DetectorErrorModel restrict_dem(const DetectorErrorModel &dem, const std::vector<bool> &keep) {
    if (keep.size() != dem.num_detectors) {
        throw std::invalid_argument("keep mask has " + std::to_string(keep.size()) + " entries for " +
                                    std::to_string(dem.num_detectors) + " detectors");
    }
    std::vector<int64_t> index(dem.num_detectors, -1);
    DetectorErrorModel out;
    out.num_observables = dem.num_observables;
    for (size_t d = 0; d < dem.num_detectors; d++) {
        if (keep[d]) {
            index[d] = static_cast<int64_t>(out.num_detectors++);
            if (d < dem.detector_coords.size()) {
                out.detector_coords.push_back(dem.detector_coords[d]);
            }
        }
    }
    auto project = [&](const FaultSignature &s) {
        FaultSignature r;
        r.observables = s.observables;
        for (auto d : s.detectors) {
            if (index[d] >= 0) {
                r.detectors.push_back(static_cast<uint32_t>(index[d]));
            }
        }
        return r;
    };
    std::map<FaultSignature, size_t> slot;
    for (const auto &f : dem.faults) {
        auto sig = project(f.signature);
        if (sig.detectors.empty() && sig.observables == 0) {
            continue;
        }
        auto [it, fresh] = slot.try_emplace(sig, out.faults.size());
        if (fresh) {
            DemFault g;
            g.probability = f.probability;
            g.signature = std::move(sig);
            for (const auto &piece : f.pieces) {
                auto ps = project(piece);
                if (!ps.detectors.empty() || ps.observables != 0) {
                    g.pieces.push_back(std::move(ps));
                }
            }
            out.faults.push_back(std::move(g));
        } else {
            double &q = out.faults[it->second].probability;
            q = std::min(q + f.probability - 2 * q * f.probability, 0.5);
        }
    }
    return out;
}

std::vector<uint32_t> restrict_fired(std::span<const uint32_t> fired, const std::vector<bool> &keep) {
    std::vector<uint32_t> out;
    uint32_t next = 0, last = 0;
    for (auto d : fired) {
        for (; last < d; last++) {
            next += keep[last];
        }
        if (keep[d]) {
            out.push_back(next);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------------------
// Matching.

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double edge_weight(double p) {
    p = std::clamp(p, 1e-300, 0.5);
    return std::log((1 - p) / p);
}

struct EdgeAccumulator {
    // Key (u, v) with u < v; boundary is the largest id.
    std::map<std::pair<uint32_t, uint32_t>, std::pair<double, uint64_t>> edges;

    void add(uint32_t u, uint32_t v, double p, uint64_t obs) {
        if (u > v) {
            std::swap(u, v);
        }
        auto [it, inserted] = edges.try_emplace({u, v}, p, obs);
        if (inserted) {
            return;
        }
        auto &[q, o] = it->second;
        if (o == obs) {
            q = std::min(0.5, p + q - 2 * p * q);
        } else if (p > q) {
            // Parallel edges with different logical effect: keep the likelier one.
            q = p;
            o = obs;
        }
    }
    bool has(uint32_t u, uint32_t v) const {
        return edges.count({std::min(u, v), std::max(u, v)}) != 0;
    }
    uint64_t obs(uint32_t u, uint32_t v) const {
        return edges.at({std::min(u, v), std::max(u, v)}).second;
    }
};

// Splits a detector set into existing edges whose observables XOR to `target`.
bool split_into_edges(std::vector<uint32_t> &remaining, uint64_t acc, uint64_t target, uint32_t boundary,
                      const EdgeAccumulator &graph, std::vector<std::pair<uint32_t, uint32_t>> &chosen) {
    if (remaining.empty()) {
        return acc == target;
    }
    uint32_t first = remaining.front();
    std::vector<uint32_t> partners(remaining.begin() + 1, remaining.end());
    partners.push_back(boundary);
    for (uint32_t other : partners) {
        if (!graph.has(first, other)) {
            continue;
        }
        std::vector<uint32_t> rest;
        for (uint32_t x : remaining) {
            if (x != first && x != other) {
                rest.push_back(x);
            }
        }
        chosen.emplace_back(first, other);
        if (split_into_edges(rest, acc ^ graph.obs(first, other), target, boundary, graph, chosen)) {
            return true;
        }
        chosen.pop_back();
    }
    return false;
}

}  // namespace

MatchingDecoder::MatchingDecoder(const DetectorErrorModel &dem, std::vector<bool> keep) {
    if (!keep.empty() && keep.size() != dem.num_detectors) {
        throw std::invalid_argument("detector mask length does not match the DEM");
    }
    compact_.assign(dem.num_detectors, -1);
    for (size_t d = 0; d < dem.num_detectors; d++) {
        if (keep.empty() || keep[d]) {
            compact_[d] = static_cast<int32_t>(num_nodes_++);
        }
    }
    const uint32_t boundary = static_cast<uint32_t>(num_nodes_);
    auto project = [&](const std::vector<uint32_t> &dets) {
        std::vector<uint32_t> out;
        for (uint32_t d : dets) {
            if (compact_[d] >= 0) {
                out.push_back(static_cast<uint32_t>(compact_[d]));
            }
        }
        return out;
    };

    EdgeAccumulator graph;
    auto add_small = [&](const std::vector<uint32_t> &nodes, double p, uint64_t obs) {
        if (nodes.size() == 1) {
            graph.add(nodes[0], boundary, p, obs);
        } else if (nodes.size() == 2) {
            graph.add(nodes[0], nodes[1], p, obs);
        }
    };

    std::vector<const DemFault *> deferred;
    for (const auto &fault : dem.faults) {
        auto nodes = project(fault.signature.detectors);
        if (nodes.size() <= 2) {
            add_small(nodes, fault.probability, fault.signature.observables);
        } else {
            deferred.push_back(&fault);
        }
    }
    std::vector<const DemFault *> unresolved;
    for (const DemFault *fault : deferred) {
        bool ok = !fault->pieces.empty();
        std::vector<std::vector<uint32_t>> parts;
        for (const auto &piece : fault->pieces) {
            parts.push_back(project(piece.detectors));
            ok = ok && parts.back().size() <= 2;
        }
        if (!ok) {
            unresolved.push_back(fault);
            continue;
        }
        for (size_t k = 0; k < parts.size(); k++) {
            add_small(parts[k], fault->probability, fault->pieces[k].observables);
        }
    }
    for (const DemFault *fault : unresolved) {
        auto nodes = project(fault->signature.detectors);
        std::vector<std::pair<uint32_t, uint32_t>> chosen;
        if (!split_into_edges(nodes, 0, fault->signature.observables, boundary, graph, chosen)) {
            throw std::invalid_argument("non-matchable DEM: a fault touches " + std::to_string(nodes.size()) +
                                        " detectors and cannot be split into edges");
        }
        for (auto [u, v] : chosen) {
            graph.add(u, v, fault->probability, graph.obs(u, v));
        }
    }

    std::vector<std::vector<std::tuple<uint32_t, double, uint64_t>>> adj(num_nodes_ + 1);
    for (const auto &[key, val] : graph.edges) {
        edges_.push_back({key.first, key.second, val.first, val.second});
        double w = edge_weight(val.first);
        adj[key.first].emplace_back(key.second, w, val.second);
        adj[key.second].emplace_back(key.first, w, val.second);
    }

    const size_t n = num_nodes_ + 1;
    dist_.assign(n * n, kInf);
    path_obs_.assign(n * n, 0);
    using Item = std::pair<double, uint32_t>;
    for (uint32_t src = 0; src < n; src++) {
        double *dist = &dist_[size_t{src} * n];
        uint64_t *obs = &path_obs_[size_t{src} * n];
        std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
        dist[src] = 0;
        heap.emplace(0.0, src);
        while (!heap.empty()) {
            auto [d, u] = heap.top();
            heap.pop();
            if (d > dist[u]) {
                continue;
            }
            for (const auto &[v, w, o] : adj[u]) {
                if (d + w < dist[v]) {
                    dist[v] = d + w;
                    obs[v] = obs[u] ^ o;
                    heap.emplace(dist[v], v);
                }
            }
        }
    }
}

MatchingDecoder MatchingDecoder::for_basis(const DetectorErrorModel &dem, PauliBasis basis) {
    return MatchingDecoder(dem, basis_detectors(dem, basis));
}

uint64_t MatchingDecoder::decode(std::span<const uint32_t> fired) {
    return decode_detailed(fired).observables;
}

MatchingDecoder::Result MatchingDecoder::decode_detailed(std::span<const uint32_t> fired) const {
    std::vector<uint32_t> nodes;
    for (uint32_t d : fired) {
        if (d >= compact_.size()) {
            throw std::invalid_argument("fired detector index out of range");
        }
        if (compact_[d] >= 0) {
            nodes.push_back(static_cast<uint32_t>(compact_[d]));
        }
    }
    Result result;
    if (nodes.empty()) {
        return result;
    }
    const uint32_t boundary = static_cast<uint32_t>(num_nodes_);
    // Integer distances; an unreachable boundary gets a large finite stand-in so that
    // pairing inside the component is forced.
    constexpr double kScale = 1 << 20;
    constexpr int64_t kFar = int64_t{1} << 40;
    auto to_int = [&](double d) {
        return std::isinf(d) ? kFar : static_cast<int64_t>(std::llround(d * kScale));
    };
    const size_t m = nodes.size();
    std::vector<int64_t> to_boundary(m);
    for (size_t i = 0; i < m; i++) {
        to_boundary[i] = to_int(distance(nodes[i], boundary));
    }
    std::vector<std::tuple<int, int, int64_t>> edges;
    for (size_t i = 0; i < m; i++) {
        for (size_t j = i + 1; j < m; j++) {
            double d = distance(nodes[i], nodes[j]);
            if (std::isinf(d)) {
                continue;
            }
            int64_t saving = to_boundary[i] + to_boundary[j] - to_int(d);
            if (saving > 0) {
                edges.emplace_back(static_cast<int>(i), static_cast<int>(j), saving);
            }
        }
    }
    auto mate = max_weight_matching(static_cast<int>(m), edges);
    for (size_t i = 0; i < m; i++) {
        if (mate[i] < 0) {
            result.weight += distance(nodes[i], boundary);
            result.observables ^= path_obs_[size_t{nodes[i]} * (num_nodes_ + 1) + boundary];
        } else if (static_cast<size_t>(mate[i]) > i) {
            uint32_t other = nodes[mate[i]];
            result.weight += distance(nodes[i], other);
            result.observables ^= path_obs_[size_t{nodes[i]} * (num_nodes_ + 1) + other];
        }
    }
    return result;
}

// ---------------------------------------------------------------------------------------
// BP-OSD.

BpOsdDecoder::BpOsdDecoder(BinaryMatrix check, std::vector<double> priors, BinaryMatrix logical, BpOsdConfig config)
    : check_(std::move(check)), logical_(std::move(logical)), config_(config) {
    if (config_.max_iterations < 1) {
        throw std::invalid_argument("max_iterations must be at least 1");
    }
    if (priors.size() != check_.cols()) {
        throw std::invalid_argument("prior count does not match the check matrix columns");
    }
    if (logical_.cols() != check_.cols() && !(logical_.rows() == 0)) {
        throw std::invalid_argument("logical matrix column count does not match the check matrix");
    }
    if (logical_.rows() > 64) {
        throw std::invalid_argument("at most 64 observables are supported");
    }
    if (config_.osd_order > 20) {
        throw std::invalid_argument("osd_order above 20 is not supported");
    }
    const size_t n = check_.cols();
    for (double p : priors) {
        if (!(p >= 0 && p <= 1)) {
            throw std::invalid_argument("priors must lie in [0, 1]");
        }
        double q = std::clamp(p, 1e-12, 1 - 1e-12);
        channel_llr_.push_back(std::log((1 - q) / q));
    }
    col_rows_ = check_.column_supports();
    columns_.reserve(n);
    for (size_t c = 0; c < n; c++) {
        columns_.push_back(BitVector::from_support(check_.rows(), col_rows_[c]));
    }
    col_edges_.assign(n, {});
    row_start_.push_back(0);
    for (size_t r = 0; r < check_.rows(); r++) {
        for (uint32_t c : check_.row(r)) {
            col_edges_[c].push_back(edge_col_.size());
            edge_col_.push_back(c);
        }
        row_start_.push_back(edge_col_.size());
    }
    c2v_.assign(edge_col_.size(), 0);
    v2c_.assign(edge_col_.size(), 0);
    posterior_.assign(n, 0);
    hard_ = BitVector(n);
}

std::unique_ptr<BpOsdDecoder> BpOsdDecoder::from_dem(const DetectorErrorModel &dem, BpOsdConfig config) {
    auto m = dem_matrices(dem);
    return std::make_unique<BpOsdDecoder>(std::move(m.check), std::move(m.priors), std::move(m.logical), config);
}

void BpOsdDecoder::product_sum_row(size_t lo, size_t hi, bool syndrome_bit) {
    // Leave-one-out products of tanh(v/2) from prefix and suffix products.
    size_t w = hi - lo;
    scratch_.resize(2 * w + 2);
    double *prefix = scratch_.data();
    double *suffix = prefix + w + 1;
    prefix[0] = 1;
    suffix[w] = 1;
    for (size_t k = 0; k < w; k++) {
        prefix[k + 1] = prefix[k] * std::tanh(v2c_[lo + k] / 2);
    }
    for (size_t k = w; k-- > 0;) {
        suffix[k] = suffix[k + 1] * std::tanh(v2c_[lo + k] / 2);
    }
    constexpr double kLimit = 1 - 1e-15;
    for (size_t k = 0; k < w; k++) {
        double t = std::clamp(prefix[k] * suffix[k + 1], -kLimit, kLimit);
        double m = 2 * std::atanh(t);
        c2v_[lo + k] = syndrome_bit ? -m : m;
    }
}

bool BpOsdDecoder::run_bp(const BitVector &syndrome) {
    const size_t n = check_.cols();
    for (size_t e = 0; e < edge_col_.size(); e++) {
        v2c_[e] = channel_llr_[edge_col_[e]];
    }
    for (size_t iter = 0; iter < config_.max_iterations; iter++) {
        for (size_t r = 0; r < check_.rows(); r++) {
            size_t lo = row_start_[r], hi = row_start_[r + 1];
            if (config_.method == BpMethod::kProductSum) {
                product_sum_row(lo, hi, syndrome.get(r));
                continue;
            }
            bool neg = syndrome.get(r);
            double min1 = kInf, min2 = kInf;
            size_t arg = lo;
            for (size_t e = lo; e < hi; e++) {
                double a = std::fabs(v2c_[e]);
                neg ^= v2c_[e] < 0;
                if (a < min1) {
                    min2 = min1;
                    min1 = a;
                    arg = e;
                } else if (a < min2) {
                    min2 = a;
                }
            }
            for (size_t e = lo; e < hi; e++) {
                double mag = config_.scaling * (e == arg ? min2 : min1);
                bool sign = neg ^ (v2c_[e] < 0);
                c2v_[e] = sign ? -mag : mag;
            }
        }
        for (size_t c = 0; c < n; c++) {
            double total = channel_llr_[c];
            for (size_t e : col_edges_[c]) {
                total += c2v_[e];
            }
            posterior_[c] = total;
            hard_.set(c, total < 0);
            for (size_t e : col_edges_[c]) {
                v2c_[e] = total - c2v_[e];
            }
        }
        bool ok = true;
        for (size_t r = 0; r < check_.rows() && ok; r++) {
            bool parity = false;
            for (size_t e = row_start_[r]; e < row_start_[r + 1]; e++) {
                parity ^= hard_.get(edge_col_[e]);
            }
            ok = parity == syndrome.get(r);
        }
        if (ok) {
            return true;
        }
    }
    return false;
}

namespace {

// Columns inserted one at a time into an echelon basis; each basis vector remembers which
// inserted columns it is the sum of.
class IncrementalBasis {
   public:
    IncrementalBasis(size_t rows, size_t max_rank) : rows_(rows), max_rank_(max_rank) {
    }

    size_t rank() const {
        return vecs_.size();
    }
    const std::vector<uint32_t> &columns() const {
        return cols_;
    }

    /// Returns true when the column was independent and became a pivot.
    bool insert(const BitVector &column, uint32_t col_index) {
        BitVector v = column;
        BitVector combo(max_rank_);
        for (size_t i = 0; i < vecs_.size(); i++) {
            if (v.get(pivots_[i])) {
                v ^= vecs_[i];
                combo ^= combos_[i];
            }
        }
        size_t pivot = v.first_set();
        if (pivot >= rows_) {
            return false;
        }
        combo.set(vecs_.size());
        vecs_.push_back(std::move(v));
        combos_.push_back(std::move(combo));
        pivots_.push_back(pivot);
        cols_.push_back(col_index);
        return true;
    }

    /// Reduces `target` against the basis; returns whether it lies in the span and the
    /// combination (over inserted pivots) reproducing it.
    bool reduce(BitVector &target, BitVector &combo) const {
        combo = BitVector(max_rank_);
        for (size_t i = 0; i < vecs_.size(); i++) {
            if (target.get(pivots_[i])) {
                target ^= vecs_[i];
                combo ^= combos_[i];
            }
        }
        return !target.any();
    }

    /// Reduction step against only the newest vector.
    void reduce_last(BitVector &target, BitVector &combo) const {
        size_t i = vecs_.size() - 1;
        if (target.get(pivots_[i])) {
            target ^= vecs_[i];
            combo ^= combos_[i];
        }
    }

   private:
    size_t rows_;
    size_t max_rank_;
    std::vector<BitVector> vecs_;
    std::vector<BitVector> combos_;
    std::vector<size_t> pivots_;
    std::vector<uint32_t> cols_;
};

}  // namespace

BitVector BpOsdDecoder::run_osd(const BitVector &syndrome) {
    const size_t n = check_.cols();
    const size_t m = check_.rows();
    std::vector<uint32_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](uint32_t a, uint32_t b) {
        return posterior_[a] < posterior_[b];
    });
    const size_t max_rank = std::min(m, n);
    IncrementalBasis basis(m, max_rank);
    BitVector residual = syndrome;
    BitVector combo(max_rank);
    std::vector<uint32_t> non_pivots;
    bool solved = !residual.any();
    size_t next = 0;
    for (; next < n; next++) {
        if (solved && config_.osd_order == 0) {
            break;
        }
        if (basis.rank() == max_rank) {
            non_pivots.push_back(order[next]);
            continue;
        }
        if (basis.insert(columns_[order[next]], order[next])) {
            if (!solved) {
                basis.reduce_last(residual, combo);
                solved = !residual.any();
            }
        } else {
            non_pivots.push_back(order[next]);
        }
    }
    if (!solved) {
        throw std::invalid_argument("syndrome lies outside the column space of the check matrix");
    }
    auto expand = [&](const BitVector &cmb) {
        BitVector e(n);
        for (uint32_t k : cmb.support()) {
            e.flip(basis.columns()[k]);
        }
        return e;
    };
    BitVector best = expand(combo);
    if (config_.osd_order == 0 || non_pivots.empty()) {
        return best;
    }
    auto cost = [&](const BitVector &e) {
        double total = 0;
        for (uint32_t c : e.support()) {
            total += channel_llr_[c];
        }
        return total;
    };
    double best_cost = cost(best);
    size_t lambda = std::min(config_.osd_order, non_pivots.size());
    for (uint64_t pattern = 1; pattern < (uint64_t{1} << lambda); pattern++) {
        BitVector target = syndrome;
        BitVector fixed(n);
        for (size_t b = 0; b < lambda; b++) {
            if ((pattern >> b) & 1) {
                target ^= columns_[non_pivots[b]];
                fixed.flip(non_pivots[b]);
            }
        }
        BitVector cmb;
        if (!basis.reduce(target, cmb)) {
            continue;
        }
        BitVector e = expand(cmb) ^ fixed;
        double c = cost(e);
        if (c < best_cost) {
            best_cost = c;
            best = std::move(e);
        }
    }
    return best;
}

BitVector BpOsdDecoder::decode_syndrome(const BitVector &syndrome) {
    if (syndrome.size() != check_.rows()) {
        throw std::invalid_argument("syndrome length does not match the check matrix rows");
    }
    decodes_++;
    if (!syndrome.any()) {
        return BitVector(check_.cols());
    }
    BitVector estimate;
    if (run_bp(syndrome)) {
        estimate = hard_;
    } else {
        osd_invocations_++;
        estimate = run_osd(syndrome);
    }
    if (check_.multiply(estimate) != syndrome) {
        throw std::logic_error("BP-OSD estimate does not reproduce the syndrome");
    }
    return estimate;
}

uint64_t BpOsdDecoder::decode(std::span<const uint32_t> fired) {
    BitVector syndrome(check_.rows());
    for (uint32_t d : fired) {
        if (d >= check_.rows()) {
            throw std::invalid_argument("fired detector index out of range");
        }
        syndrome.flip(d);
    }
    BitVector estimate = decode_syndrome(syndrome);
    uint64_t mask = 0;
    for (size_t o = 0; o < logical_.rows(); o++) {
        bool parity = false;
        for (uint32_t c : logical_.row(o)) {
            parity ^= estimate.get(c);
        }
        mask |= uint64_t{parity} << o;
    }
    return mask;
}

// ---------------------------------------------------------------------------------------
// Statistics.

std::pair<double, double> wilson_interval(size_t failures, size_t shots, double z) {
    if (shots == 0) {
        return {0.0, 1.0};
    }
    if (failures > shots) {
        throw std::invalid_argument("failures exceed shots");
    }
    double n = static_cast<double>(shots);
    double k = static_cast<double>(failures);
    double z2 = z * z;
    double center = (k + z2 / 2) / (n + z2);
    double half = z / (n + z2) * std::sqrt(k * (n - k) / n + z2 / 4);
    return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

ErrorRate logical_error_rate(const std::vector<uint64_t> &predictions, const BitTable &observables) {
    if (predictions.size() != observables.rows()) {
        throw std::invalid_argument("prediction count does not match the number of shots");
    }
    if (observables.cols() > 64) {
        throw std::invalid_argument("at most 64 observables are supported");
    }
    ErrorRate r;
    r.shots = predictions.size();
    for (size_t s = 0; s < r.shots; s++) {
        uint64_t actual = observables.words_per_row() ? observables.row(s)[0] : 0;
        r.failures += actual != predictions[s];
    }
    r.rate = r.shots ? static_cast<double>(r.failures) / r.shots : 0.0;
    std::tie(r.ci_lo, r.ci_hi) = wilson_interval(r.failures, r.shots);
    return r;
}

}  // namespace netqec
