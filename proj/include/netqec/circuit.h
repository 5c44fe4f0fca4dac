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


#ifndef NETQEC_CIRCUIT_H
#define NETQEC_CIRCUIT_H

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace netqec {

enum class Op : uint8_t {
    R,
    RX,
    H,
    CX,
    CZ,
    M,
    MX,
    X,
    Y,
    Z,
    DEPOLARIZE1,
    DEPOLARIZE2,
    X_ERROR,
    Z_ERROR,
    /// Uniform non-identity Pauli on all targets together.
    GHZ_DEPOLARIZE,
    /// Pauli applied to a qubit when a recorded measurement came out 1. Targets are
    /// (measurement index, qubit) pairs. Written as `CX rec[-k] q`, `CY rec[-k] q`, `CZ rec[-k] q`.
    COND_X,
    COND_Y,
    COND_Z,
    DETECTOR,
    OBSERVABLE_INCLUDE,
    TICK,
};

enum class OpKind : uint8_t { Reset, Gate1, Gate2, Measure, Pauli, Noise1, Noise2, NoiseMulti, Cond, Detector, Observable, Tick };

OpKind op_kind(Op op);
const char *op_name(Op op);
bool is_noise(Op op);

struct Instruction {
    Op op = Op::TICK;
    /// Probability for noise channels and measurement flips, coordinates for detectors,
    /// index for observables.
    std::vector<double> args;
    /// Qubits, or absolute measurement indices for DETECTOR / OBSERVABLE_INCLUDE.
    std::vector<uint32_t> targets;
    std::string tag;

    bool operator==(const Instruction &) const = default;
};

class Circuit {
   public:
    /// Validates targets, probabilities and measurement references. Throws std::invalid_argument.
    void append(Instruction inst);
    void append(Op op, std::vector<uint32_t> targets, std::vector<double> args = {}, std::string tag = {});

    size_t num_qubits() const {
        return num_qubits_;
    }
    size_t num_measurements() const {
        return num_measurements_;
    }
    size_t num_detectors() const {
        return num_detectors_;
    }
    size_t num_observables() const {
        return num_observables_;
    }
    size_t num_ticks() const {
        return num_ticks_;
    }
    const std::vector<Instruction> &instructions() const {
        return instructions_;
    }

    /// Number of instructions with this opcode (and tag, when given).
    size_t count(Op op, std::string_view tag = {}) const;
    /// Same circuit with every noise channel and measurement flip stripped.
    Circuit without_noise() const;

    std::string str() const;
    static Circuit from_text(std::string_view text);

    bool operator==(const Circuit &other) const {
        return instructions_ == other.instructions_;
    }

    /// Instruction index where each syndrome round starts; round 0 is the ideal projection.
    std::vector<size_t> round_starts;

   private:
    std::vector<Instruction> instructions_;
    size_t num_qubits_ = 0;
    size_t num_measurements_ = 0;
    size_t num_detectors_ = 0;
    size_t num_observables_ = 0;
    size_t num_ticks_ = 0;
};

}  // namespace netqec

#endif
