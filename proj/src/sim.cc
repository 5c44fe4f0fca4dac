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


#include "netqec/sim.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstring>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "netqec/rng.h"

namespace netqec {

bool BitTable::row_any(size_t r) const {
    const uint64_t *p = row(r);
    for (size_t w = 0; w < words_per_row_; w++) {
        if (p[w]) {
            return true;
        }
    }
    return false;
}

std::vector<uint32_t> BitTable::row_support(size_t r) const {
    std::vector<uint32_t> out;
    const uint64_t *p = row(r);
    for (size_t w = 0; w < words_per_row_; w++) {
        uint64_t bits = p[w];
        while (bits) {
            out.push_back(static_cast<uint32_t>(w * 64 + __builtin_ctzll(bits)));
            bits &= bits - 1;
        }
    }
    return out;
}

void BitTable::append_rows(const BitTable &other) {
    if (rows_ == 0 && cols_ == 0 && data_.empty()) {
        *this = other;
        return;
    }
    if (other.cols_ != cols_) {
        throw std::invalid_argument("appending rows with a different column count");
    }
    data_.insert(data_.end(), other.data_.begin(), other.data_.end());
    rows_ += other.rows_;
}

namespace {

// Pauli frames for a batch of 64*W parallel lanes (shots, or injected faults).
class FrameState {
   public:
    FrameState(const Circuit &c, size_t words)
        : w_(words),
          x_(c.num_qubits() * words, 0),
          z_(c.num_qubits() * words, 0),
          rec_(c.num_measurements() * words, 0),
          det_(c.num_detectors() * words, 0),
          obs_(c.num_observables() * words, 0) {
    }

    size_t words() const {
        return w_;
    }
    uint64_t *x(size_t q) {
        return x_.data() + q * w_;
    }
    uint64_t *z(size_t q) {
        return z_.data() + q * w_;
    }
    uint64_t *rec(size_t m) {
        return rec_.data() + m * w_;
    }
    uint64_t *det(size_t d) {
        return det_.data() + d * w_;
    }
    uint64_t *obs(size_t o) {
        return obs_.data() + o * w_;
    }

    void clear(uint64_t *p) {
        std::memset(p, 0, w_ * sizeof(uint64_t));
    }
    void xor_into(uint64_t *dst, const uint64_t *src) {
        for (size_t k = 0; k < w_; k++) {
            dst[k] ^= src[k];
        }
    }
    void swap_words(uint64_t *a, uint64_t *b) {
        for (size_t k = 0; k < w_; k++) {
            std::swap(a[k], b[k]);
        }
    }
    void invert(uint64_t *p) {
        for (size_t k = 0; k < w_; k++) {
            p[k] = ~p[k];
        }
    }

    // Applies every non-noise effect of an instruction. Measurement records are written
    // without flips; cursors advance over measurements and detectors.
    void apply(const Instruction &inst, size_t &m_cursor, size_t &d_cursor) {
        const auto &t = inst.targets;
        switch (inst.op) {
            case Op::R:
            case Op::RX:
                for (auto q : t) {
                    clear(x(q));
                    clear(z(q));
                }
                break;
            case Op::H:
                for (auto q : t) {
                    swap_words(x(q), z(q));
                }
                break;
            case Op::CX:
                for (size_t k = 0; k < t.size(); k += 2) {
                    xor_into(x(t[k + 1]), x(t[k]));
                    xor_into(z(t[k]), z(t[k + 1]));
                }
                break;
            case Op::CZ:
                for (size_t k = 0; k < t.size(); k += 2) {
                    xor_into(z(t[k]), x(t[k + 1]));
                    xor_into(z(t[k + 1]), x(t[k]));
                }
                break;
            case Op::M:
                // A Z frame component on a Z eigenstate is a global phase, so it is dropped.
                for (auto q : t) {
                    std::memcpy(rec(m_cursor++), x(q), w_ * sizeof(uint64_t));
                    clear(z(q));
                }
                break;
            case Op::MX:
                for (auto q : t) {
                    std::memcpy(rec(m_cursor++), z(q), w_ * sizeof(uint64_t));
                    clear(x(q));
                }
                break;
            case Op::X:
                for (auto q : t) {
                    invert(x(q));
                }
                break;
            case Op::Y:
                for (auto q : t) {
                    invert(x(q));
                    invert(z(q));
                }
                break;
            case Op::Z:
                for (auto q : t) {
                    invert(z(q));
                }
                break;
            case Op::COND_X:
            case Op::COND_Y:
            case Op::COND_Z:
                for (size_t k = 0; k < t.size(); k += 2) {
                    const uint64_t *r = rec(t[k]);
                    if (inst.op != Op::COND_Z) {
                        xor_into(x(t[k + 1]), r);
                    }
                    if (inst.op != Op::COND_X) {
                        xor_into(z(t[k + 1]), r);
                    }
                }
                break;
            case Op::DETECTOR: {
                uint64_t *d = det(d_cursor++);
                for (auto m : t) {
                    xor_into(d, rec(m));
                }
                break;
            }
            case Op::OBSERVABLE_INCLUDE: {
                uint64_t *o = obs(static_cast<size_t>(inst.args[0]));
                for (auto m : t) {
                    xor_into(o, rec(m));
                }
                break;
            }
            default:
                break;
        }
    }

    // Applies a Pauli (1 = X, 2 = Z, 3 = Y) to one lane of one qubit.
    void apply_pauli(uint32_t q, size_t lane, unsigned pauli) {
        uint64_t bit = uint64_t{1} << (lane & 63);
        if (pauli & 1) {
            x(q)[lane >> 6] ^= bit;
        }
        if (pauli & 2) {
            z(q)[lane >> 6] ^= bit;
        }
    }

   private:
    size_t w_;
    std::vector<uint64_t> x_, z_, rec_, det_, obs_;
};

constexpr size_t kBlockWords = 16;
constexpr size_t kBlockShots = kBlockWords * 64;

// Visits every (slot, lane) hit of independent Bernoulli(p) trials over slots x lanes.
template <typename F>
void for_each_hit(Rng &rng, double p, size_t slots, size_t lanes, F &&f) {
    if (p <= 0 || slots == 0) {
        return;
    }
    size_t total = slots * lanes;
    if (p >= 1) {
        for (size_t i = 0; i < total; i++) {
            f(i / lanes, i % lanes);
        }
        return;
    }
    double log_1mp = std::log1p(-p);
    uint64_t pos = rng.geometric(log_1mp);
    while (pos < total) {
        f(pos / lanes, pos % lanes);
        uint64_t skip = rng.geometric(log_1mp);
        if (skip >= total) {
            break;
        }
        pos += skip + 1;
    }
}

void simulate_block(const Circuit &circuit, uint64_t seed, size_t block, FrameState &fs) {
    size_t m_cursor = 0;
    size_t d_cursor = 0;
    const auto &insts = circuit.instructions();
    for (size_t i = 0; i < insts.size(); i++) {
        const auto &inst = insts[i];
        auto kind = op_kind(inst.op);
        if (kind == OpKind::Noise1 || kind == OpKind::Noise2 || kind == OpKind::NoiseMulti) {
            double p = inst.args[0];
            if (p <= 0) {
                continue;
            }
            Rng rng(mix_keys({seed, block, i}));
            const auto &t = inst.targets;
            switch (inst.op) {
                case Op::DEPOLARIZE1:
                    for_each_hit(rng, p, t.size(), kBlockShots,
                                 [&](size_t k, size_t s) { fs.apply_pauli(t[k], s, 1 + rng.below(3)); });
                    break;
                case Op::X_ERROR:
                    for_each_hit(rng, p, t.size(), kBlockShots, [&](size_t k, size_t s) { fs.apply_pauli(t[k], s, 1); });
                    break;
                case Op::Z_ERROR:
                    for_each_hit(rng, p, t.size(), kBlockShots, [&](size_t k, size_t s) { fs.apply_pauli(t[k], s, 2); });
                    break;
                case Op::DEPOLARIZE2:
                    for_each_hit(rng, p, t.size() / 2, kBlockShots, [&](size_t k, size_t s) {
                        unsigned c = 1 + static_cast<unsigned>(rng.below(15));
                        fs.apply_pauli(t[2 * k], s, c & 3);
                        fs.apply_pauli(t[2 * k + 1], s, c >> 2);
                    });
                    break;
                case Op::GHZ_DEPOLARIZE: {
                    uint64_t count = (uint64_t{1} << (2 * t.size())) - 1;
                    for_each_hit(rng, p, 1, kBlockShots, [&](size_t, size_t s) {
                        uint64_t c = 1 + rng.below(count);
                        for (size_t j = 0; j < t.size(); j++) {
                            fs.apply_pauli(t[j], s, (c >> (2 * j)) & 3);
                        }
                    });
                    break;
                }
                default:
                    break;
            }
            continue;
        }
        size_t m_before = m_cursor;
        fs.apply(inst, m_cursor, d_cursor);
        if (kind == OpKind::Measure && !inst.args.empty() && inst.args[0] > 0) {
            Rng rng(mix_keys({seed, block, i}));
            for_each_hit(rng, inst.args[0], m_cursor - m_before, kBlockShots, [&](size_t k, size_t s) {
                fs.rec(m_before + k)[s >> 6] ^= uint64_t{1} << (s & 63);
            });
        }
    }
}

void scatter_bits(FrameState &fs, size_t count, bool detectors, BitTable &out, size_t shot0, size_t shots) {
    for (size_t d = 0; d < count; d++) {
        const uint64_t *words = detectors ? fs.det(d) : fs.obs(d);
        for (size_t w = 0; w < fs.words(); w++) {
            uint64_t bits = words[w];
            while (bits) {
                size_t s = shot0 + w * 64 + __builtin_ctzll(bits);
                bits &= bits - 1;
                if (s < shots) {
                    out.flip(s, d);
                }
            }
        }
    }
}

}  // namespace

FrameSample frame_sample(const Circuit &circuit, size_t shots, uint64_t seed, size_t workers) {
    FrameSample out{BitTable(shots, circuit.num_detectors()), BitTable(shots, circuit.num_observables())};
    size_t blocks = (shots + kBlockShots - 1) / kBlockShots;
    workers = std::max<size_t>(1, std::min(workers, blocks));
    std::atomic<size_t> next{0};
    auto work = [&]() {
        while (true) {
            size_t b = next.fetch_add(1);
            if (b >= blocks) {
                return;
            }
            FrameState fs(circuit, kBlockWords);
            simulate_block(circuit, seed, b, fs);
            // Blocks own disjoint rows, and rows are whole words, so writes never overlap.
            scatter_bits(fs, circuit.num_detectors(), true, out.detectors, b * kBlockShots, shots);
            scatter_bits(fs, circuit.num_observables(), false, out.observables, b * kBlockShots, shots);
        }
    };
    if (workers == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (size_t k = 0; k < workers; k++) {
            pool.emplace_back(work);
        }
        for (auto &t : pool) {
            t.join();
        }
    }
    return out;
}

namespace {

FaultSignature xor_signatures(const FaultSignature &a, const FaultSignature &b) {
    FaultSignature out;
    std::set_symmetric_difference(a.detectors.begin(), a.detectors.end(), b.detectors.begin(), b.detectors.end(),
                                  std::back_inserter(out.detectors));
    out.observables = a.observables ^ b.observables;
    return out;
}

bool empty_signature(const FaultSignature &s) {
    return s.detectors.empty() && s.observables == 0;
}

// Number of basis-Pauli lanes an instruction injects (zero-probability channels inject none).
size_t lanes_for(const Instruction &inst) {
    auto kind = op_kind(inst.op);
    if (kind == OpKind::Measure) {
        return !inst.args.empty() && inst.args[0] > 0 ? inst.targets.size() : 0;
    }
    if (!is_noise(inst.op) || inst.args[0] <= 0) {
        return 0;
    }
    if (inst.op == Op::X_ERROR || inst.op == Op::Z_ERROR) {
        return inst.targets.size();
    }
    return 2 * inst.targets.size();
}

}  // namespace

namespace {

// A channel applying one of `count` = 4^w - 1 non-identity Paulis with total probability p is
// the product of `count` independent components, each firing with the returned probability.
double component_probability(double p, double count) {
    double base = 1 - p * (count + 1) / count;
    if (base <= 0) {
        return 0.5;
    }
    return -std::expm1(std::log(base) * 2 / (count + 1)) / 2;
}

}  // namespace

DetectorErrorModel extract_dem(const Circuit &circuit) {
    if (circuit.num_observables() > 64) {
        throw std::invalid_argument("at most 64 observables are supported");
    }
    const auto &insts = circuit.instructions();
    std::vector<size_t> lane_base(insts.size() + 1, 0);
    for (size_t i = 0; i < insts.size(); i++) {
        lane_base[i + 1] = lane_base[i] + lanes_for(insts[i]);
    }
    size_t total_lanes = lane_base.back();
    std::vector<FaultSignature> lane_sig(total_lanes);

    constexpr size_t kChunkWords = 64;
    constexpr size_t kChunkLanes = kChunkWords * 64;
    for (size_t lo = 0; lo < total_lanes; lo += kChunkLanes) {
        size_t hi = std::min(total_lanes, lo + kChunkLanes);
        FrameState fs(circuit, kChunkWords);
        size_t m_cursor = 0, d_cursor = 0;
        for (size_t i = 0; i < insts.size(); i++) {
            const auto &inst = insts[i];
            auto kind = op_kind(inst.op);
            if (lane_base[i + 1] <= lo) {
                // Nothing injected yet: frames are still zero, only advance the cursors.
                if (kind == OpKind::Measure) {
                    m_cursor += inst.targets.size();
                } else if (kind == OpKind::Detector) {
                    d_cursor++;
                }
                continue;
            }
            bool injects = lane_base[i] < hi && lane_base[i + 1] > lo;
            if (is_noise(inst.op) || inst.op == Op::X || inst.op == Op::Y || inst.op == Op::Z) {
                if (injects && is_noise(inst.op)) {
                    const auto &t = inst.targets;
                    for (size_t lane = std::max(lo, lane_base[i]); lane < std::min(hi, lane_base[i + 1]); lane++) {
                        size_t k = lane - lane_base[i];
                        if (inst.op == Op::X_ERROR) {
                            fs.apply_pauli(t[k], lane - lo, 1);
                        } else if (inst.op == Op::Z_ERROR) {
                            fs.apply_pauli(t[k], lane - lo, 2);
                        } else {
                            fs.apply_pauli(t[k / 2], lane - lo, k % 2 == 0 ? 1 : 2);
                        }
                    }
                }
                continue;
            }
            size_t m_before = m_cursor;
            fs.apply(inst, m_cursor, d_cursor);
            if (injects && kind == OpKind::Measure) {
                for (size_t lane = std::max(lo, lane_base[i]); lane < std::min(hi, lane_base[i + 1]); lane++) {
                    size_t k = lane - lane_base[i];
                    fs.rec(m_before + k)[(lane - lo) >> 6] ^= uint64_t{1} << ((lane - lo) & 63);
                }
            }
        }
        for (size_t d = 0; d < circuit.num_detectors(); d++) {
            const uint64_t *words = fs.det(d);
            for (size_t w = 0; w < kChunkWords; w++) {
                uint64_t bits = words[w];
                while (bits) {
                    size_t lane = lo + w * 64 + __builtin_ctzll(bits);
                    bits &= bits - 1;
                    if (lane < hi) {
                        lane_sig[lane].detectors.push_back(static_cast<uint32_t>(d));
                    }
                }
            }
        }
        for (size_t o = 0; o < circuit.num_observables(); o++) {
            const uint64_t *words = fs.obs(o);
            for (size_t w = 0; w < kChunkWords; w++) {
                uint64_t bits = words[w];
                while (bits) {
                    size_t lane = lo + w * 64 + __builtin_ctzll(bits);
                    bits &= bits - 1;
                    if (lane < hi) {
                        lane_sig[lane].observables |= uint64_t{1} << o;
                    }
                }
            }
        }
    }

    DetectorErrorModel dem;
    dem.num_detectors = circuit.num_detectors();
    dem.num_observables = circuit.num_observables();
    dem.detector_coords.reserve(dem.num_detectors);
    for (const auto &inst : insts) {
        if (inst.op == Op::DETECTOR) {
            dem.detector_coords.push_back(inst.args);
        }
    }

    std::map<FaultSignature, size_t> index;
    auto add = [&](FaultSignature sig, double p, std::vector<FaultSignature> pieces) {
        if (p <= 0 || empty_signature(sig)) {
            return;
        }
        auto it = index.find(sig);
        if (it == index.end()) {
            index.emplace(sig, dem.faults.size());
            if (pieces.size() < 2) {
                pieces.clear();
            }
            dem.faults.push_back({p, std::move(sig), std::move(pieces)});
        } else {
            double &q = dem.faults[it->second].probability;
            q = q + p - 2 * q * p;
        }
    };
    // Signature of Pauli `pauli` (1 = X, 2 = Z, 3 = Y) on the k-th qubit of a two-lane-per-qubit channel.
    auto pauli_sig = [&](size_t base, size_t k, unsigned pauli) {
        if (pauli == 1) {
            return lane_sig[base + 2 * k];
        }
        if (pauli == 2) {
            return lane_sig[base + 2 * k + 1];
        }
        return xor_signatures(lane_sig[base + 2 * k], lane_sig[base + 2 * k + 1]);
    };

    for (size_t i = 0; i < insts.size(); i++) {
        if (lane_base[i] == lane_base[i + 1]) {
            continue;
        }
        const auto &inst = insts[i];
        size_t base = lane_base[i];
        const auto &t = inst.targets;
        double p = inst.args[0];
        switch (inst.op) {
            case Op::M:
            case Op::MX:
            case Op::X_ERROR:
            case Op::Z_ERROR:
                for (size_t k = 0; k < t.size(); k++) {
                    add(lane_sig[base + k], p, {});
                }
                break;
            case Op::DEPOLARIZE1:
                for (size_t k = 0; k < t.size(); k++) {
                    for (unsigned pauli = 1; pauli <= 3; pauli++) {
                        add(pauli_sig(base, k, pauli), component_probability(p, 3), {});
                    }
                }
                break;
            case Op::DEPOLARIZE2:
                for (size_t k = 0; k < t.size(); k += 2) {
                    for (unsigned c = 1; c < 16; c++) {
                        std::vector<FaultSignature> pieces;
                        FaultSignature total;
                        for (size_t j = 0; j < 2; j++) {
                            unsigned pauli = j == 0 ? (c & 3) : (c >> 2);
                            if (pauli == 0) {
                                continue;
                            }
                            auto s = pauli_sig(base, k + j, pauli);
                            total = xor_signatures(total, s);
                            if (!empty_signature(s)) {
                                pieces.push_back(std::move(s));
                            }
                        }
                        add(std::move(total), component_probability(p, 15), std::move(pieces));
                    }
                }
                break;
            case Op::GHZ_DEPOLARIZE: {
                uint64_t count = (uint64_t{1} << (2 * t.size())) - 1;
                for (uint64_t c = 1; c <= count; c++) {
                    std::vector<FaultSignature> pieces;
                    FaultSignature total;
                    for (size_t j = 0; j < t.size(); j++) {
                        unsigned pauli = (c >> (2 * j)) & 3;
                        if (pauli == 0) {
                            continue;
                        }
                        auto s = pauli_sig(base, j, pauli);
                        total = xor_signatures(total, s);
                        if (!empty_signature(s)) {
                            pieces.push_back(std::move(s));
                        }
                    }
                    add(std::move(total), component_probability(p, static_cast<double>(count)), std::move(pieces));
                }
                break;
            }
            default:
                break;
        }
    }
    for (auto &f : dem.faults) {
        f.probability = std::min(f.probability, 0.5);
    }
    return dem;
}

std::string DetectorErrorModel::str() const {
    std::ostringstream out;
    out.precision(17);
    auto write_sig = [&](const FaultSignature &s) {
        for (auto d : s.detectors) {
            out << " D" << d;
        }
        for (size_t o = 0; o < 64; o++) {
            if ((s.observables >> o) & 1) {
                out << " L" << o;
            }
        }
    };
    for (const auto &f : faults) {
        out << "error(" << f.probability << ")";
        if (f.pieces.empty()) {
            write_sig(f.signature);
        } else {
            for (size_t k = 0; k < f.pieces.size(); k++) {
                if (k) {
                    out << " ^";
                }
                write_sig(f.pieces[k]);
            }
        }
        out << '\n';
    }
    for (size_t d = 0; d < detector_coords.size(); d++) {
        out << "detector";
        if (!detector_coords[d].empty()) {
            out << '(';
            for (size_t k = 0; k < detector_coords[d].size(); k++) {
                out << (k ? ", " : "") << detector_coords[d][k];
            }
            out << ')';
        }
        out << " D" << d << '\n';
    }
    return out.str();
}

FrameSample dem_sample(const DetectorErrorModel &dem, size_t shots, uint64_t seed) {
    FrameSample out{BitTable(shots, dem.num_detectors), BitTable(shots, dem.num_observables)};
    for (size_t f = 0; f < dem.faults.size(); f++) {
        const auto &fault = dem.faults[f];
        Rng rng(mix_keys({seed, 0xDE5, f}));
        for_each_hit(rng, fault.probability, 1, shots, [&](size_t, size_t s) {
            for (auto d : fault.signature.detectors) {
                out.detectors.flip(s, d);
            }
            uint64_t o = fault.signature.observables;
            while (o) {
                out.observables.flip(s, __builtin_ctzll(o));
                o &= o - 1;
            }
        });
    }
    return out;
}

DemMatrices dem_matrices(const DetectorErrorModel &dem) {
    std::vector<std::pair<uint32_t, uint32_t>> check_entries, logical_entries;
    DemMatrices m;
    for (uint32_t f = 0; f < dem.faults.size(); f++) {
        for (auto d : dem.faults[f].signature.detectors) {
            check_entries.emplace_back(d, f);
        }
        uint64_t o = dem.faults[f].signature.observables;
        while (o) {
            logical_entries.emplace_back(static_cast<uint32_t>(__builtin_ctzll(o)), f);
            o &= o - 1;
        }
        m.priors.push_back(dem.faults[f].probability);
    }
    m.check = BinaryMatrix::from_entries(dem.num_detectors, dem.faults.size(), check_entries);
    m.logical = BinaryMatrix::from_entries(dem.num_observables, dem.faults.size(), logical_entries);
    return m;
}

namespace {

constexpr char kMagic[4] = {'N', 'Q', 'F', 'S'};
constexpr uint32_t kVersion = 1;

template <typename T>
void put(std::ostream &out, T v) {
    unsigned char buf[sizeof(T)];
    for (size_t k = 0; k < sizeof(T); k++) {
        buf[k] = static_cast<unsigned char>(v >> (8 * k));
    }
    out.write(reinterpret_cast<const char *>(buf), sizeof(T));
}

template <typename T>
T get(std::istream &in) {
    unsigned char buf[sizeof(T)];
    if (!in.read(reinterpret_cast<char *>(buf), sizeof(T))) {
        throw std::invalid_argument("sample file is truncated");
    }
    T v = 0;
    for (size_t k = 0; k < sizeof(T); k++) {
        v |= static_cast<T>(buf[k]) << (8 * k);
    }
    return v;
}

}  // namespace

void write_sample(std::ostream &out, const FrameSample &sample) {
    out.write(kMagic, 4);
    put<uint32_t>(out, kVersion);
    put<uint64_t>(out, sample.shots());
    put<uint64_t>(out, sample.detectors.cols());
    put<uint64_t>(out, sample.observables.cols());
    for (size_t s = 0; s < sample.shots(); s++) {
        for (size_t w = 0; w < sample.detectors.words_per_row(); w++) {
            put<uint64_t>(out, sample.detectors.row(s)[w]);
        }
        for (size_t w = 0; w < sample.observables.words_per_row(); w++) {
            put<uint64_t>(out, sample.observables.row(s)[w]);
        }
    }
}

FrameSample read_sample(std::istream &in) {
    char magic[4];
    if (!in.read(magic, 4) || std::memcmp(magic, kMagic, 4) != 0) {
        throw std::invalid_argument("not a sample file (bad magic)");
    }
    if (get<uint32_t>(in) != kVersion) {
        throw std::invalid_argument("unsupported sample file version");
    }
    uint64_t shots = get<uint64_t>(in);
    uint64_t dets = get<uint64_t>(in);
    uint64_t obs = get<uint64_t>(in);
    if (shots > (uint64_t{1} << 40) || dets > (uint64_t{1} << 32) || obs > 64) {
        throw std::invalid_argument("sample file header is implausible");
    }
    FrameSample s{BitTable(shots, dets), BitTable(shots, obs)};
    for (size_t r = 0; r < shots; r++) {
        for (size_t w = 0; w < s.detectors.words_per_row(); w++) {
            s.detectors.row(r)[w] = get<uint64_t>(in);
        }
        for (size_t w = 0; w < s.observables.words_per_row(); w++) {
            s.observables.row(r)[w] = get<uint64_t>(in);
        }
    }
    return s;
}

std::string sample_to_csv(const FrameSample &sample) {
    std::string out;
    for (size_t s = 0; s < sample.shots(); s++) {
        for (size_t d = 0; d < sample.detectors.cols(); d++) {
            out += sample.detectors.get(s, d) ? '1' : '0';
        }
        out += ',';
        for (size_t o = 0; o < sample.observables.cols(); o++) {
            out += sample.observables.get(s, o) ? '1' : '0';
        }
        out += '\n';
    }
    return out;
}

}  // namespace netqec
