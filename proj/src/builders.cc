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


#include "netqec/builders.h"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <stdexcept>
#include <string>

namespace netqec {

NoiseModel NoiseModel::uniform(double p, double p_ghz, double p_bell) {
    NoiseModel n;
    n.p_gate1 = n.p_gate2 = n.p_meas = n.p_reset = n.p_idle = p;
    n.p_ghz = p_ghz;
    n.p_bell = p_bell;
    return n;
}

void NoiseModel::validate() const {
    const std::pair<const char *, double> rates[] = {
        {"p_gate1", p_gate1}, {"p_gate2", p_gate2}, {"p_meas", p_meas}, {"p_reset", p_reset},
        {"p_idle", p_idle},   {"p_ghz", p_ghz},     {"p_bell", p_bell},
    };
    for (auto [name, v] : rates) {
        if (!(v >= 0 && v <= 1)) {
            throw std::invalid_argument(std::string(name) + " must lie in [0, 1], got " + std::to_string(v));
        }
    }
}

namespace {

// Fidelities and rates are decimal inputs; rounding to 15 significant digits removes the
// binary representation error of 1 - F so that 0.99 maps to exactly 0.0125.
double round_to_15_digits(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.15g", v);
    return std::strtod(buf, nullptr);
}

}  // namespace

double bell_fidelity_to_p(double fidelity) {
    if (!(fidelity >= 0.2 && fidelity <= 1)) {
        throw std::invalid_argument("Bell fidelity must lie in [0.2, 1], got " + std::to_string(fidelity));
    }
    return round_to_15_digits(1.25 * (1 - fidelity));
}

double bell_p_to_fidelity(double p_bell) {
    if (!(p_bell >= 0 && p_bell <= 1)) {
        throw std::invalid_argument("p_bell must lie in [0, 1]");
    }
    return round_to_15_digits(1 - 0.8 * p_bell);
}

namespace {

void append_ghz_noise(Circuit &circuit, const std::vector<uint32_t> &ghz, const NoiseModel &noise) {
    if (noise.p_ghz <= 0) {
        return;
    }
    if (noise.ghz_channel == GhzChannel::kPerQubit) {
        circuit.append(Op::DEPOLARIZE1, ghz, {noise.p_ghz}, "ghz");
    } else {
        circuit.append(Op::GHZ_DEPOLARIZE, ghz, {noise.p_ghz});
    }
}

}  // namespace

size_t expected_detector_count(size_t basis_checks, size_t other_checks, size_t rounds) {
    return (rounds + 1) * basis_checks + rounds * other_checks;
}

namespace {

std::vector<uint32_t> flatten(const std::vector<std::pair<uint32_t, uint32_t>> &pairs) {
    std::vector<uint32_t> out;
    out.reserve(2 * pairs.size());
    for (auto [a, b] : pairs) {
        out.push_back(a);
        out.push_back(b);
    }
    return out;
}

// Emits gates with the noise that follows them and tracks which qubits were touched in the
// current tick so idle noise can go on the rest.
class TickWriter {
   public:
    TickWriter(Circuit &c, size_t num_qubits) : c_(c), busy_(num_qubits, false), idle_ok_(num_qubits, false) {
    }

    NoiseModel noise;

    void allow_idle(uint32_t q) {
        idle_ok_[q] = true;
    }

    void mark_busy(const std::vector<uint32_t> &qs) {
        for (auto q : qs) {
            busy_[q] = true;
        }
    }

    void reset(Op op, const std::vector<uint32_t> &qs, bool noisy = true) {
        if (qs.empty()) {
            return;
        }
        c_.append(op, qs);
        mark_busy(qs);
        if (noisy && noise.p_reset > 0) {
            c_.append(op == Op::R ? Op::X_ERROR : Op::Z_ERROR, qs, {noise.p_reset});
        }
    }

    void h(const std::vector<uint32_t> &qs, bool noisy = true) {
        if (qs.empty()) {
            return;
        }
        c_.append(Op::H, qs);
        mark_busy(qs);
        if (noisy && noise.p_gate1 > 0) {
            c_.append(Op::DEPOLARIZE1, qs, {noise.p_gate1});
        }
    }

    void cx(const std::vector<std::pair<uint32_t, uint32_t>> &pairs, bool noisy = true) {
        if (pairs.empty()) {
            return;
        }
        auto flat = flatten(pairs);
        c_.append(Op::CX, flat);
        mark_busy(flat);
        if (noisy && noise.p_gate2 > 0) {
            c_.append(Op::DEPOLARIZE2, flat, {noise.p_gate2});
        }
    }

    std::vector<uint32_t> measure(Op op, const std::vector<uint32_t> &qs, bool noisy = true) {
        std::vector<uint32_t> records;
        if (qs.empty()) {
            return records;
        }
        uint32_t start = static_cast<uint32_t>(c_.num_measurements());
        std::vector<double> args;
        if (noisy && noise.p_meas > 0) {
            args.push_back(noise.p_meas);
        }
        c_.append(op, qs, args);
        mark_busy(qs);
        for (size_t k = 0; k < qs.size(); k++) {
            records.push_back(start + static_cast<uint32_t>(k));
        }
        return records;
    }

    void end_tick(bool idle_noise = true) {
        if (idle_noise && noise.p_idle > 0) {
            std::vector<uint32_t> idle;
            for (uint32_t q = 0; q < busy_.size(); q++) {
                if (idle_ok_[q] && !busy_[q]) {
                    idle.push_back(q);
                }
            }
            if (!idle.empty()) {
                c_.append(Op::DEPOLARIZE1, idle, {noise.p_idle});
            }
        }
        c_.append(Op::TICK, {});
        std::fill(busy_.begin(), busy_.end(), false);
    }

    Circuit &circuit() {
        return c_;
    }

   private:
    Circuit &c_;
    std::vector<bool> busy_;
    std::vector<bool> idle_ok_;
};

struct CheckRecords {
    PauliBasis type;
    uint32_t index;
    std::vector<uint32_t> records;
};

double basis_flag(PauliBasis b) {
    return b == PauliBasis::X ? 1.0 : 0.0;
}

// Detectors comparing round r with round r-1. `prev` is empty for round 1.
void emit_round_detectors(Circuit &c, const std::vector<CheckRecords> &now, const std::vector<CheckRecords> &prev,
                          size_t round, PauliBasis basis) {
    for (size_t i = 0; i < now.size(); i++) {
        std::vector<uint32_t> targets = now[i].records;
        bool anchored = round == 1 && now[i].type == basis;
        if (!anchored) {
            targets.insert(targets.end(), prev[i].records.begin(), prev[i].records.end());
        }
        std::sort(targets.begin(), targets.end());
        c.append(Op::DETECTOR, targets,
                 {static_cast<double>(now[i].index), static_cast<double>(round), basis_flag(now[i].type)});
    }
}

void emit_final_detectors(Circuit &c, const CssCode &code, const std::vector<CheckRecords> &last,
                          const std::vector<uint32_t> &data_records, size_t rounds, PauliBasis basis) {
    const auto &h = basis == PauliBasis::X ? code.hx : code.hz;
    for (const auto &cr : last) {
        if (cr.type != basis) {
            continue;
        }
        std::vector<uint32_t> targets = cr.records;
        for (auto q : h.row(cr.index)) {
            targets.push_back(data_records[q]);
        }
        std::sort(targets.begin(), targets.end());
        c.append(Op::DETECTOR, targets,
                 {static_cast<double>(cr.index), static_cast<double>(rounds + 1), basis_flag(cr.type)});
    }
    for (size_t i = 0; i < code.logicals.size(); i++) {
        const auto &support = basis == PauliBasis::X ? code.logicals[i].x_support : code.logicals[i].z_support;
        std::vector<uint32_t> targets;
        for (auto q : support) {
            targets.push_back(data_records[q]);
        }
        std::sort(targets.begin(), targets.end());
        c.append(Op::OBSERVABLE_INCLUDE, targets, {static_cast<double>(i)});
    }
}

std::vector<uint32_t> iota(uint32_t start, size_t count) {
    std::vector<uint32_t> v(count);
    for (size_t k = 0; k < count; k++) {
        v[k] = start + static_cast<uint32_t>(k);
    }
    return v;
}

}  // namespace

void append_teleported_cnot(Circuit &circuit, uint32_t control, uint32_t target, uint32_t a, uint32_t b,
                            const NoiseModel &noise) {
    std::vector<uint32_t> qs{control, target, a, b};
    std::sort(qs.begin(), qs.end());
    if (std::adjacent_find(qs.begin(), qs.end()) != qs.end()) {
        throw std::invalid_argument("teleported CNOT needs four distinct qubits");
    }
    noise.validate();
    circuit.append(Op::R, {a, b});
    circuit.append(Op::H, {a});
    circuit.append(Op::CX, {a, b});
    circuit.append(Op::DEPOLARIZE2, {a, b}, {noise.p_bell}, "bell");
    circuit.append(Op::CX, {control, a});
    if (noise.p_gate2 > 0) {
        circuit.append(Op::DEPOLARIZE2, {control, a}, {noise.p_gate2});
    }
    uint32_t m_a = static_cast<uint32_t>(circuit.num_measurements());
    circuit.append(Op::M, {a}, noise.p_meas > 0 ? std::vector<double>{noise.p_meas} : std::vector<double>{});
    circuit.append(Op::CX, {b, target});
    if (noise.p_gate2 > 0) {
        circuit.append(Op::DEPOLARIZE2, {b, target}, {noise.p_gate2});
    }
    uint32_t m_b = static_cast<uint32_t>(circuit.num_measurements());
    circuit.append(Op::MX, {b}, noise.p_meas > 0 ? std::vector<double>{noise.p_meas} : std::vector<double>{});
    circuit.append(Op::COND_X, {m_a, target});
    circuit.append(Op::COND_Z, {m_b, control});
}

namespace {

// Ideal GHZ state on `ghz` (X-type) or its Hadamard-rotated form (Z-type), built as a
// log-depth CNOT tree. Each returned layer is one tick worth of operations.
struct GhzPrep {
    std::vector<uint32_t> leaders;
    std::vector<std::vector<std::pair<uint32_t, uint32_t>>> tree_layers;
    std::vector<uint32_t> rotate;
};

void add_ghz_prep(GhzPrep &prep, const std::vector<uint32_t> &ghz, PauliBasis type) {
    prep.leaders.push_back(ghz[0]);
    size_t have = 1;
    for (size_t layer = 0; have < ghz.size(); layer++) {
        if (prep.tree_layers.size() <= layer) {
            prep.tree_layers.emplace_back();
        }
        size_t grow = std::min(have, ghz.size() - have);
        for (size_t k = 0; k < grow; k++) {
            prep.tree_layers[layer].emplace_back(ghz[k], ghz[have + k]);
        }
        have += grow;
    }
    if (type == PauliBasis::Z) {
        prep.rotate.insert(prep.rotate.end(), ghz.begin(), ghz.end());
    }
}

}  // namespace

std::vector<uint32_t> append_ghz_measurement(Circuit &circuit, const std::vector<uint32_t> &data, PauliBasis type,
                                             const std::vector<uint32_t> &ghz_qubits, const NoiseModel &noise) {
    if (data.size() != ghz_qubits.size() || data.empty()) {
        throw std::invalid_argument("GHZ measurement needs one GHZ qubit per data qubit");
    }
    noise.validate();
    GhzPrep prep;
    add_ghz_prep(prep, ghz_qubits, type);
    circuit.append(Op::R, ghz_qubits);
    circuit.append(Op::H, prep.leaders);
    for (const auto &layer : prep.tree_layers) {
        circuit.append(Op::CX, flatten(layer));
    }
    if (!prep.rotate.empty()) {
        circuit.append(Op::H, prep.rotate);
    }
    append_ghz_noise(circuit, ghz_qubits, noise);
    std::vector<std::pair<uint32_t, uint32_t>> pairs;
    for (size_t k = 0; k < data.size(); k++) {
        if (type == PauliBasis::X) {
            pairs.emplace_back(ghz_qubits[k], data[k]);
        } else {
            pairs.emplace_back(data[k], ghz_qubits[k]);
        }
    }
    auto flat = flatten(pairs);
    circuit.append(Op::CX, flat);
    if (noise.p_gate2 > 0) {
        circuit.append(Op::DEPOLARIZE2, flat, {noise.p_gate2});
    }
    uint32_t start = static_cast<uint32_t>(circuit.num_measurements());
    circuit.append(type == PauliBasis::X ? Op::MX : Op::M, ghz_qubits,
                   noise.p_meas > 0 ? std::vector<double>{noise.p_meas} : std::vector<double>{});
    return iota(start, ghz_qubits.size());
}

Circuit build_surface_circuit(int d, size_t rounds, const NoiseModel &noise, bool networked, PauliBasis basis) {
    noise.validate();
    if (rounds < 1) {
        throw std::invalid_argument("rounds must be at least 1");
    }
    auto code = build_surface_code(d);
    const auto &layout = *code.surface;
    uint32_t n = static_cast<uint32_t>(code.n);
    std::map<std::array<int, 2>, uint32_t> data_at;
    for (uint32_t q = 0; q < n; q++) {
        data_at[layout.data[q]] = q;
    }

    struct Check {
        PauliBasis type;
        uint32_t index;
        uint32_t ancilla;
        // Neighbor per direction N, W, E, S, or UINT32_MAX on the boundary.
        std::array<uint32_t, 4> dirs;
        std::vector<uint32_t> data;
        std::vector<uint32_t> ghz;
        int layer;
    };
    std::vector<Check> checks;
    uint32_t next_qubit = n;
    const int dr[4] = {-1, 0, 0, 1};
    const int dc[4] = {0, -1, 1, 0};
    for (auto type : {PauliBasis::X, PauliBasis::Z}) {
        const auto &positions = type == PauliBasis::X ? layout.x_checks : layout.z_checks;
        for (uint32_t i = 0; i < positions.size(); i++) {
            Check ch;
            ch.type = type;
            ch.index = i;
            ch.ancilla = next_qubit++;
            auto [r, c] = positions[i];
            for (int k = 0; k < 4; k++) {
                auto it = data_at.find({r + dr[k], c + dc[k]});
                ch.dirs[k] = it == data_at.end() ? UINT32_MAX : it->second;
                if (it != data_at.end()) {
                    ch.data.push_back(it->second);
                }
            }
            // Checks of one type sharing a data qubit always differ in this parity.
            int parity = type == PauliBasis::X ? ((r - 1) / 2 + c / 2) % 2 : (r / 2 + (c - 1) / 2) % 2;
            ch.layer = (type == PauliBasis::X ? 0 : 2) + parity;
            checks.push_back(std::move(ch));
        }
    }
    if (networked) {
        for (auto &ch : checks) {
            ch.ghz = iota(next_qubit, ch.data.size());
            next_qubit += static_cast<uint32_t>(ch.data.size());
        }
    }

    Circuit c;
    TickWriter w(c, next_qubit);
    for (uint32_t q = 0; q < n; q++) {
        w.allow_idle(q);
    }
    if (!networked) {
        for (const auto &ch : checks) {
            w.allow_idle(ch.ancilla);
        }
    }

    // Ancilla-based extraction: each layer's ancillas reset one tick before their first CNOT
    // and are measured one tick after their last, overlapping with neighboring layers.
    auto ancilla_round = [&]() {
        std::vector<CheckRecords> recs(checks.size());
        for (int t = 0; t < 18; t++) {
            std::vector<uint32_t> rx, rz, mx, mz;
            std::vector<std::pair<uint32_t, uint32_t>> pairs;
            std::vector<size_t> mx_checks, mz_checks;
            for (size_t i = 0; i < checks.size(); i++) {
                const auto &ch = checks[i];
                int base = 4 * ch.layer;
                bool is_x = ch.type == PauliBasis::X;
                if (t == base) {
                    (is_x ? rx : rz).push_back(ch.ancilla);
                } else if (t >= base + 1 && t <= base + 4) {
                    uint32_t q = ch.dirs[t - base - 1];
                    if (q != UINT32_MAX) {
                        pairs.push_back(is_x ? std::make_pair(ch.ancilla, q) : std::make_pair(q, ch.ancilla));
                    }
                } else if (t == base + 5) {
                    (is_x ? mx : mz).push_back(ch.ancilla);
                    (is_x ? mx_checks : mz_checks).push_back(i);
                }
            }
            w.reset(Op::RX, rx);
            w.reset(Op::R, rz);
            w.cx(pairs);
            auto rec_x = w.measure(Op::MX, mx);
            auto rec_z = w.measure(Op::M, mz);
            for (size_t k = 0; k < mx_checks.size(); k++) {
                recs[mx_checks[k]] = {checks[mx_checks[k]].type, checks[mx_checks[k]].index, {rec_x[k]}};
            }
            for (size_t k = 0; k < mz_checks.size(); k++) {
                recs[mz_checks[k]] = {checks[mz_checks[k]].type, checks[mz_checks[k]].index, {rec_z[k]}};
            }
            w.end_tick();
        }
        return recs;
    };

    // GHZ-based extraction: resource states appear noiselessly (their infidelity is the
    // GHZ_DEPOLARIZE channel), then one CNOT tick per layer with measurements pipelined.
    auto ghz_round = [&]() {
        GhzPrep prep;
        std::vector<uint32_t> all_ghz;
        for (const auto &ch : checks) {
            add_ghz_prep(prep, ch.ghz, ch.type);
            all_ghz.insert(all_ghz.end(), ch.ghz.begin(), ch.ghz.end());
        }
        c.append(Op::R, all_ghz);
        w.end_tick(false);
        c.append(Op::H, prep.leaders);
        w.end_tick(false);
        for (const auto &layer : prep.tree_layers) {
            c.append(Op::CX, flatten(layer));
            w.end_tick(false);
        }
        if (!prep.rotate.empty()) {
            c.append(Op::H, prep.rotate);
            w.end_tick(false);
        }
        for (const auto &ch : checks) {
            append_ghz_noise(c, ch.ghz, w.noise);
        }

        std::vector<CheckRecords> recs(checks.size());
        for (int t = 0; t < 5; t++) {
            std::vector<std::pair<uint32_t, uint32_t>> pairs;
            std::vector<uint32_t> mx, mz;
            std::vector<size_t> mx_checks, mz_checks;
            for (size_t i = 0; i < checks.size(); i++) {
                const auto &ch = checks[i];
                bool is_x = ch.type == PauliBasis::X;
                if (ch.layer == t) {
                    for (size_t k = 0; k < ch.data.size(); k++) {
                        pairs.push_back(is_x ? std::make_pair(ch.ghz[k], ch.data[k])
                                             : std::make_pair(ch.data[k], ch.ghz[k]));
                    }
                } else if (ch.layer == t - 1) {
                    auto &m = is_x ? mx : mz;
                    m.insert(m.end(), ch.ghz.begin(), ch.ghz.end());
                    (is_x ? mx_checks : mz_checks).push_back(i);
                }
            }
            w.cx(pairs);
            auto rec_x = w.measure(Op::MX, mx);
            auto rec_z = w.measure(Op::M, mz);
            size_t pos = 0;
            for (auto i : mx_checks) {
                size_t wgt = checks[i].ghz.size();
                recs[i] = {checks[i].type, checks[i].index,
                           std::vector<uint32_t>(rec_x.begin() + pos, rec_x.begin() + pos + wgt)};
                pos += wgt;
            }
            pos = 0;
            for (auto i : mz_checks) {
                size_t wgt = checks[i].ghz.size();
                recs[i] = {checks[i].type, checks[i].index,
                           std::vector<uint32_t>(rec_z.begin() + pos, rec_z.begin() + pos + wgt)};
                pos += wgt;
            }
            w.end_tick();
        }
        return recs;
    };

    // Round 0: noiseless preparation and projection onto the code space.
    w.noise = NoiseModel{};
    c.round_starts.push_back(c.instructions().size());
    w.reset(basis == PauliBasis::Z ? Op::R : Op::RX, iota(0, n));
    w.end_tick();
    auto prev = ancilla_round();

    w.noise = noise;
    for (size_t r = 1; r <= rounds; r++) {
        c.round_starts.push_back(c.instructions().size());
        auto now = networked ? ghz_round() : ancilla_round();
        emit_round_detectors(c, now, prev, r, basis);
        prev = std::move(now);
    }
    auto data_records = w.measure(basis == PauliBasis::Z ? Op::M : Op::MX, iota(0, n));
    emit_final_detectors(c, code, prev, data_records, rounds, basis);
    return c;
}

BBSchedule default_bb_schedule() {
    // Order of the six neighbor terms per tick for each check type, after the standard
    // depth-8 cycle for weight-6 BB codes: X checks idle at tick 0 while preparing, Z checks
    // measure at tick 6 and reset at tick 7.
    constexpr int P = BBLayer::kPrepare;
    constexpr int M = BBLayer::kMeasure;
    return {{
        {P, 3},
        {1, 5},
        {4, 0},
        {3, 1},
        {5, 2},
        {0, 4},
        {2, M},
        {M, P},
    }};
}

void validate_bb_schedule(const BBSchedule &schedule) {
    for (int type = 0; type < 2; type++) {
        std::array<int, 6> seen{};
        int prep = -1, meas = -1;
        for (int t = 0; t < 8; t++) {
            int v = type == 0 ? schedule[t].x : schedule[t].z;
            if (v >= 0 && v < 6) {
                seen[v]++;
            } else if (v == BBLayer::kPrepare) {
                if (prep >= 0) {
                    throw std::invalid_argument("schedule prepares a check type twice");
                }
                prep = t;
            } else if (v == BBLayer::kMeasure) {
                if (meas >= 0) {
                    throw std::invalid_argument("schedule measures a check type twice");
                }
                meas = t;
            } else if (v != BBLayer::kIdle) {
                throw std::invalid_argument("schedule slot value " + std::to_string(v) + " is not a term");
            }
        }
        for (int k = 0; k < 6; k++) {
            if (seen[k] != 1) {
                throw std::invalid_argument("schedule must use every neighbor term exactly once per check type");
            }
        }
        if (prep < 0 || meas < 0) {
            throw std::invalid_argument("schedule must prepare and measure each check type");
        }
        // Cyclically: prepare, then all six terms, then measure.
        for (int t = 0; t < 8; t++) {
            int v = type == 0 ? schedule[t].x : schedule[t].z;
            if (v < 0) {
                continue;
            }
            int since_prep = (t - prep + 8) % 8;
            int until_meas = (meas - t + 8) % 8;
            if (since_prep + until_meas != (meas - prep + 8) % 8) {
                throw std::invalid_argument("schedule places a CNOT outside the prepare/measure window");
            }
        }
    }
}

uint32_t bb_neighbor(const BBSpec &spec, PauliBasis check_type, uint32_t check, int term) {
    if (term < 0 || term >= 6 || spec.a_terms.size() != 3 || spec.b_terms.size() != 3) {
        throw std::invalid_argument("bb_neighbor needs a 3+3 term spec and a term in 0..5");
    }
    uint32_t half = spec.ell * spec.m;
    auto inverse = [&](Monomial mono) {
        uint32_t order = mono.var == 'x' ? spec.ell : spec.m;
        mono.exponent = (order - mono.exponent % order) % order;
        return mono;
    };
    if (check_type == PauliBasis::X) {
        if (term < 3) {
            return monomial_target(spec.ell, spec.m, spec.a_terms[term], check);
        }
        return half + monomial_target(spec.ell, spec.m, spec.b_terms[term - 3], check);
    }
    if (term < 3) {
        return monomial_target(spec.ell, spec.m, inverse(spec.b_terms[term]), check);
    }
    return half + monomial_target(spec.ell, spec.m, inverse(spec.a_terms[term - 3]), check);
}

Circuit build_bb_circuit(const CssCode &code, size_t rounds, const NoiseModel &noise, const Partition *partition,
                         PauliBasis basis, const BBSchedule &schedule) {
    noise.validate();
    validate_bb_schedule(schedule);
    if (!code.bb || code.bb->a_terms.size() != 3 || code.bb->b_terms.size() != 3) {
        throw std::invalid_argument("build_bb_circuit needs a BB code with three terms per polynomial");
    }
    if (rounds < 1) {
        throw std::invalid_argument("rounds must be at least 1");
    }
    const auto &spec = *code.bb;
    uint32_t n = static_cast<uint32_t>(code.n);
    uint32_t half = n / 2;
    uint32_t x_anc = n;
    uint32_t z_anc = n + half;
    if (partition && partition->assignment.size() != size_t{n} + 2 * half) {
        throw std::invalid_argument("partition vertex set does not match the code");
    }
    auto node_of_check = [&](PauliBasis type, uint32_t c) {
        return partition->assignment[(type == PauliBasis::X ? x_anc : z_anc) + c];
    };

    // Bell-pair qubits per crossing (check, term) interaction, fixed for the whole circuit.
    uint32_t next_qubit = n + 2 * half;
    std::map<std::tuple<int, uint32_t, int>, std::pair<uint32_t, uint32_t>> bell;
    std::vector<uint32_t> bell_qubits;
    if (partition) {
        for (auto type : {PauliBasis::X, PauliBasis::Z}) {
            for (uint32_t c = 0; c < half; c++) {
                for (int term = 0; term < 6; term++) {
                    uint32_t q = bb_neighbor(spec, type, c, term);
                    if (partition->assignment[q] != node_of_check(type, c)) {
                        bell[{static_cast<int>(type), c, term}] = {next_qubit, next_qubit + 1};
                        bell_qubits.push_back(next_qubit);
                        bell_qubits.push_back(next_qubit + 1);
                        next_qubit += 2;
                    }
                }
            }
        }
    }

    Circuit c;
    TickWriter w(c, next_qubit);
    for (uint32_t q = 0; q < n + 2 * half; q++) {
        w.allow_idle(q);
    }

    struct Gadget {
        uint32_t control, target, a, b;
    };

    auto run_round = [&](bool use_partition) {
        std::vector<CheckRecords> recs(2 * half);
        bool bridged = use_partition && partition && !bell.empty();
        if (bridged) {
            // Pre-shared Bell pairs for the round; preparation itself is ideal and only the
            // depolarizing channel models their infidelity.
            std::vector<uint32_t> as, bs;
            for (const auto &[key, ab] : bell) {
                as.push_back(ab.first);
                bs.push_back(ab.second);
            }
            c.append(Op::R, bell_qubits);
            w.end_tick(false);
            c.append(Op::H, as);
            w.end_tick(false);
            std::vector<std::pair<uint32_t, uint32_t>> ab_pairs;
            for (size_t k = 0; k < as.size(); k++) {
                ab_pairs.emplace_back(as[k], bs[k]);
            }
            c.append(Op::CX, flatten(ab_pairs));
            for (auto [a, b] : ab_pairs) {
                c.append(Op::DEPOLARIZE2, {a, b}, {w.noise.p_bell}, "bell");
            }
            w.end_tick(false);
        }
        const bool overhead = w.noise.bridge_overhead;
        std::vector<Gadget> pending;
        auto flush = [&](std::vector<Gadget> &done) {
            if (done.empty()) {
                return;
            }
            std::vector<uint32_t> as, bs;
            for (const auto &g : done) {
                as.push_back(g.a);
                bs.push_back(g.b);
            }
            auto rec_a = w.measure(Op::M, as, overhead);
            auto rec_b = w.measure(Op::MX, bs, overhead);
            std::vector<uint32_t> cond_x, cond_z;
            std::vector<std::pair<uint32_t, uint32_t>> replaced;
            for (size_t k = 0; k < done.size(); k++) {
                cond_x.push_back(rec_a[k]);
                cond_x.push_back(done[k].target);
                cond_z.push_back(rec_b[k]);
                cond_z.push_back(done[k].control);
                replaced.emplace_back(done[k].control, done[k].target);
            }
            c.append(Op::COND_X, cond_x);
            c.append(Op::COND_Z, cond_z);
            if (!overhead && w.noise.p_gate2 > 0) {
                c.append(Op::DEPOLARIZE2, flatten(replaced), {w.noise.p_gate2});
            }
            done.clear();
        };
        for (int t = 0; t < 8; t++) {
            std::vector<uint32_t> rx, rz, mx, mz;
            std::vector<std::pair<uint32_t, uint32_t>> local;
            std::vector<Gadget> gadgets;
            for (auto type : {PauliBasis::X, PauliBasis::Z}) {
                int action = type == PauliBasis::X ? schedule[t].x : schedule[t].z;
                uint32_t anc0 = type == PauliBasis::X ? x_anc : z_anc;
                if (action == BBLayer::kPrepare) {
                    auto &v = type == PauliBasis::X ? rx : rz;
                    for (uint32_t k = 0; k < half; k++) {
                        v.push_back(anc0 + k);
                    }
                } else if (action == BBLayer::kMeasure) {
                    auto &v = type == PauliBasis::X ? mx : mz;
                    for (uint32_t k = 0; k < half; k++) {
                        v.push_back(anc0 + k);
                    }
                } else if (action >= 0) {
                    for (uint32_t k = 0; k < half; k++) {
                        uint32_t q = bb_neighbor(spec, type, k, action);
                        uint32_t control = type == PauliBasis::X ? anc0 + k : q;
                        uint32_t target = type == PauliBasis::X ? q : anc0 + k;
                        auto it = bridged ? bell.find({static_cast<int>(type), k, action}) : bell.end();
                        if (it == bell.end()) {
                            local.emplace_back(control, target);
                        } else {
                            gadgets.push_back({control, target, it->second.first, it->second.second});
                        }
                    }
                }
            }

            flush(pending);
            w.reset(Op::RX, rx);
            w.reset(Op::R, rz);
            w.cx(local);
            // Both halves of each gadget run alongside the local CNOTs. The Bell halves are
            // read out at the start of the next tick, before any later gate on c or t.
            std::vector<std::pair<uint32_t, uint32_t>> bridge;
            for (const auto &g : gadgets) {
                bridge.emplace_back(g.control, g.a);
                bridge.emplace_back(g.b, g.target);
            }
            w.cx(bridge, overhead);
            auto rec_x = w.measure(Op::MX, mx);
            auto rec_z = w.measure(Op::M, mz);
            for (uint32_t k = 0; k < rec_x.size(); k++) {
                recs[k] = {PauliBasis::X, k, {rec_x[k]}};
            }
            for (uint32_t k = 0; k < rec_z.size(); k++) {
                recs[half + k] = {PauliBasis::Z, k, {rec_z[k]}};
            }
            w.end_tick();
            pending = std::move(gadgets);
        }
        if (!pending.empty()) {
            flush(pending);
            w.end_tick(overhead);
        }
        return recs;
    };

    // Round 0: ideal preparation, then a noiseless local cycle projecting onto the code space.
    w.noise = NoiseModel{};
    c.round_starts.push_back(c.instructions().size());
    w.reset(basis == PauliBasis::Z ? Op::R : Op::RX, iota(0, n));
    for (auto type : {PauliBasis::X, PauliBasis::Z}) {
        int prep = -1, first_term = -1;
        for (int t = 0; t < 8; t++) {
            int v = type == PauliBasis::X ? schedule[t].x : schedule[t].z;
            if (v == BBLayer::kPrepare) {
                prep = t;
            } else if (v >= 0 && first_term < 0) {
                first_term = t;
            }
        }
        if (prep > first_term) {
            w.reset(type == PauliBasis::X ? Op::RX : Op::R, iota(type == PauliBasis::X ? x_anc : z_anc, half));
        }
    }
    w.end_tick();
    auto prev = run_round(false);

    w.noise = noise;
    for (size_t r = 1; r <= rounds; r++) {
        c.round_starts.push_back(c.instructions().size());
        auto now = run_round(true);
        emit_round_detectors(c, now, prev, r, basis);
        prev = std::move(now);
    }
    auto data_records = w.measure(basis == PauliBasis::Z ? Op::M : Op::MX, iota(0, n));
    emit_final_detectors(c, code, prev, data_records, rounds, basis);
    return c;
}

}  // namespace netqec
