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


#include "netqec/circuit.h"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace netqec {

namespace {

struct OpInfo {
    Op op;
    const char *name;
    OpKind kind;
};

constexpr OpInfo kOps[] = {
    {Op::R, "R", OpKind::Reset},
    {Op::RX, "RX", OpKind::Reset},
    {Op::H, "H", OpKind::Gate1},
    {Op::CX, "CX", OpKind::Gate2},
    {Op::CZ, "CZ", OpKind::Gate2},
    {Op::M, "M", OpKind::Measure},
    {Op::MX, "MX", OpKind::Measure},
    {Op::X, "X", OpKind::Pauli},
    {Op::Y, "Y", OpKind::Pauli},
    {Op::Z, "Z", OpKind::Pauli},
    {Op::DEPOLARIZE1, "DEPOLARIZE1", OpKind::Noise1},
    {Op::DEPOLARIZE2, "DEPOLARIZE2", OpKind::Noise2},
    {Op::X_ERROR, "X_ERROR", OpKind::Noise1},
    {Op::Z_ERROR, "Z_ERROR", OpKind::Noise1},
    {Op::GHZ_DEPOLARIZE, "GHZ_DEPOLARIZE", OpKind::NoiseMulti},
    {Op::COND_X, "CX", OpKind::Cond},
    {Op::COND_Y, "CY", OpKind::Cond},
    {Op::COND_Z, "CZ", OpKind::Cond},
    {Op::DETECTOR, "DETECTOR", OpKind::Detector},
    {Op::OBSERVABLE_INCLUDE, "OBSERVABLE_INCLUDE", OpKind::Observable},
    {Op::TICK, "TICK", OpKind::Tick},
};

const OpInfo &info(Op op) {
    return kOps[static_cast<size_t>(op)];
}

std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

[[noreturn]] void fail(size_t line, const std::string &msg) {
    throw std::invalid_argument("line " + std::to_string(line) + ": " + msg);
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
        s.remove_prefix(1);
    }
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

}  // namespace

OpKind op_kind(Op op) {
    return info(op).kind;
}

const char *op_name(Op op) {
    return info(op).name;
}

bool is_noise(Op op) {
    auto k = op_kind(op);
    return k == OpKind::Noise1 || k == OpKind::Noise2 || k == OpKind::NoiseMulti;
}

void Circuit::append(Op op, std::vector<uint32_t> targets, std::vector<double> args, std::string tag) {
    append(Instruction{op, std::move(args), std::move(targets), std::move(tag)});
}

void Circuit::append(Instruction inst) {
    auto kind = op_kind(inst.op);
    std::string name = op_name(inst.op);
    auto need_args = [&](size_t lo, size_t hi) {
        if (inst.args.size() < lo || inst.args.size() > hi) {
            throw std::invalid_argument(name + " takes between " + std::to_string(lo) + " and " + std::to_string(hi) +
                                        " arguments");
        }
    };
    auto check_probability = [&]() {
        for (double p : inst.args) {
            if (!(p >= 0 && p <= 1)) {
                throw std::invalid_argument(name + " probability " + format_double(p) + " is outside [0, 1]");
            }
        }
    };
    auto touch_qubits = [&](const std::vector<uint32_t> &qs) {
        for (auto q : qs) {
            num_qubits_ = std::max<size_t>(num_qubits_, size_t{q} + 1);
        }
    };
    auto check_distinct = [&](const std::vector<uint32_t> &qs) {
        auto sorted = qs;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
            throw std::invalid_argument(name + " targets the same qubit twice");
        }
    };
    auto check_records = [&](const std::vector<uint32_t> &recs) {
        for (auto r : recs) {
            if (r >= num_measurements_) {
                throw std::invalid_argument(name + " refers to a measurement that has not happened yet");
            }
        }
    };

    switch (kind) {
        case OpKind::Reset:
        case OpKind::Gate1:
        case OpKind::Pauli:
            need_args(0, 0);
            touch_qubits(inst.targets);
            break;
        case OpKind::Gate2:
            need_args(0, 0);
            if (inst.targets.size() % 2) {
                throw std::invalid_argument(name + " needs an even number of targets");
            }
            for (size_t k = 0; k < inst.targets.size(); k += 2) {
                if (inst.targets[k] == inst.targets[k + 1]) {
                    throw std::invalid_argument(name + " pair acts twice on qubit " + std::to_string(inst.targets[k]));
                }
            }
            touch_qubits(inst.targets);
            break;
        case OpKind::Measure:
            need_args(0, 1);
            check_probability();
            touch_qubits(inst.targets);
            num_measurements_ += inst.targets.size();
            break;
        case OpKind::Noise1:
            need_args(1, 1);
            check_probability();
            touch_qubits(inst.targets);
            break;
        case OpKind::Noise2:
            need_args(1, 1);
            check_probability();
            if (inst.targets.size() % 2) {
                throw std::invalid_argument(name + " needs an even number of targets");
            }
            for (size_t k = 0; k < inst.targets.size(); k += 2) {
                if (inst.targets[k] == inst.targets[k + 1]) {
                    throw std::invalid_argument(name + " pair acts twice on qubit " + std::to_string(inst.targets[k]));
                }
            }
            touch_qubits(inst.targets);
            break;
        case OpKind::NoiseMulti:
            need_args(1, 1);
            check_probability();
            if (inst.targets.empty() || inst.targets.size() > 16) {
                throw std::invalid_argument(name + " needs between 1 and 16 targets");
            }
            check_distinct(inst.targets);
            touch_qubits(inst.targets);
            break;
        case OpKind::Cond: {
            need_args(0, 0);
            if (inst.targets.size() % 2) {
                throw std::invalid_argument("conditional Pauli needs (record, qubit) pairs");
            }
            std::vector<uint32_t> recs, qubits;
            for (size_t k = 0; k < inst.targets.size(); k += 2) {
                recs.push_back(inst.targets[k]);
                qubits.push_back(inst.targets[k + 1]);
            }
            check_records(recs);
            touch_qubits(qubits);
            break;
        }
        case OpKind::Detector:
            check_records(inst.targets);
            num_detectors_++;
            break;
        case OpKind::Observable: {
            need_args(1, 1);
            double idx = inst.args[0];
            if (!(idx >= 0) || idx != std::floor(idx) || idx > 1e6) {
                throw std::invalid_argument("OBSERVABLE_INCLUDE index must be a nonnegative integer");
            }
            check_records(inst.targets);
            num_observables_ = std::max(num_observables_, static_cast<size_t>(idx) + 1);
            break;
        }
        case OpKind::Tick:
            need_args(0, 0);
            if (!inst.targets.empty()) {
                throw std::invalid_argument("TICK takes no targets");
            }
            num_ticks_++;
            break;
    }
    instructions_.push_back(std::move(inst));
}

size_t Circuit::count(Op op, std::string_view tag) const {
    size_t n = 0;
    for (const auto &inst : instructions_) {
        n += inst.op == op && (tag.empty() || inst.tag == tag);
    }
    return n;
}

Circuit Circuit::without_noise() const {
    Circuit out;
    for (const auto &inst : instructions_) {
        if (is_noise(inst.op)) {
            continue;
        }
        auto copy = inst;
        if (op_kind(copy.op) == OpKind::Measure) {
            copy.args.clear();
        }
        out.append(std::move(copy));
    }
    out.round_starts = round_starts;
    return out;
}

std::string Circuit::str() const {
    std::ostringstream out;
    size_t measured = 0;
    for (const auto &inst : instructions_) {
        out << op_name(inst.op);
        if (!inst.tag.empty()) {
            out << '[' << inst.tag << ']';
        }
        if (!inst.args.empty()) {
            out << '(';
            for (size_t k = 0; k < inst.args.size(); k++) {
                out << (k ? ", " : "") << format_double(inst.args[k]);
            }
            out << ')';
        }
        auto kind = op_kind(inst.op);
        for (size_t k = 0; k < inst.targets.size(); k++) {
            bool is_record = kind == OpKind::Detector || kind == OpKind::Observable || (kind == OpKind::Cond && k % 2 == 0);
            if (is_record) {
                out << " rec[-" << measured - inst.targets[k] << ']';
            } else {
                out << ' ' << inst.targets[k];
            }
        }
        out << '\n';
        if (kind == OpKind::Measure) {
            measured += inst.targets.size();
        }
    }
    return out.str();
}

Circuit Circuit::from_text(std::string_view text) {
    Circuit c;
    size_t line_no = 0;
    while (!text.empty()) {
        size_t nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        line_no++;
        if (auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }

        size_t pos = 0;
        while (pos < line.size() && (std::isalnum(static_cast<unsigned char>(line[pos])) || line[pos] == '_')) {
            pos++;
        }
        std::string name(line.substr(0, pos));
        Instruction inst;
        if (pos < line.size() && line[pos] == '[') {
            size_t close = line.find(']', pos);
            if (close == std::string_view::npos) {
                fail(line_no, "unterminated tag");
            }
            inst.tag = std::string(line.substr(pos + 1, close - pos - 1));
            pos = close + 1;
        }
        if (pos < line.size() && line[pos] == '(') {
            size_t close = line.find(')', pos);
            if (close == std::string_view::npos) {
                fail(line_no, "unterminated argument list");
            }
            auto body = line.substr(pos + 1, close - pos - 1);
            while (true) {
                size_t comma = body.find(',');
                auto piece = trim(body.substr(0, comma));
                double v;
                auto [ptr, ec] = std::from_chars(piece.data(), piece.data() + piece.size(), v);
                if (piece.empty() || ec != std::errc() || ptr != piece.data() + piece.size()) {
                    fail(line_no, "bad argument '" + std::string(piece) + "'");
                }
                inst.args.push_back(v);
                if (comma == std::string_view::npos) {
                    break;
                }
                body = body.substr(comma + 1);
            }
            pos = close + 1;
        }
        if (pos < line.size() && line[pos] != ' ' && line[pos] != '\t') {
            fail(line_no, "unexpected character after '" + name + "'");
        }

        // Targets: plain integers or rec[-k].
        struct Target {
            bool record;
            uint64_t value;
        };
        std::vector<Target> targets;
        std::istringstream ts{std::string(line.substr(pos))};
        std::string tok;
        while (ts >> tok) {
            bool record = false;
            std::string_view digits = tok;
            if (tok.rfind("rec[-", 0) == 0 && tok.back() == ']') {
                record = true;
                digits = std::string_view(tok).substr(5, tok.size() - 6);
            }
            uint64_t v;
            auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), v);
            if (digits.empty() || ec != std::errc() || ptr != digits.data() + digits.size()) {
                fail(line_no, "bad target '" + tok + "'");
            }
            if (record) {
                if (v == 0 || v > c.num_measurements_) {
                    fail(line_no, "record reference " + tok + " points before the start of the circuit");
                }
                v = c.num_measurements_ - v;
            }
            targets.push_back({record, v});
        }

        const OpInfo *found = nullptr;
        for (const auto &oi : kOps) {
            if (name == oi.name && oi.kind != OpKind::Cond) {
                found = &oi;
                break;
            }
        }
        bool conditional = !targets.empty() && targets[0].record && (name == "CX" || name == "CY" || name == "CZ");
        if (conditional) {
            inst.op = name == "CX" ? Op::COND_X : name == "CY" ? Op::COND_Y : Op::COND_Z;
        } else if (found) {
            inst.op = found->op;
        } else {
            fail(line_no, "unknown instruction '" + name + "'");
        }
        auto kind = op_kind(inst.op);
        for (size_t k = 0; k < targets.size(); k++) {
            bool want_record =
                kind == OpKind::Detector || kind == OpKind::Observable || (kind == OpKind::Cond && k % 2 == 0);
            if (targets[k].record != want_record) {
                fail(line_no, want_record ? "expected a rec[-k] target" : "unexpected rec[-k] target");
            }
            if (targets[k].value > UINT32_MAX) {
                fail(line_no, "target out of range");
            }
            inst.targets.push_back(static_cast<uint32_t>(targets[k].value));
        }
        try {
            c.append(std::move(inst));
        } catch (const std::invalid_argument &e) {
            fail(line_no, e.what());
        }
    }
    return c;
}

}  // namespace netqec
