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


#ifndef NETQEC_BUILDERS_H
#define NETQEC_BUILDERS_H

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "netqec/circuit.h"
#include "netqec/codes.h"
#include "netqec/partition.h"

namespace netqec {

enum class GhzChannel {
    /// DEPOLARIZE1(p_ghz) on every GHZ qubit.
    kPerQubit,
    /// One uniformly random non-identity w-qubit Pauli with total probability p_ghz.
    kUniform,
};

struct NoiseModel {
    double p_gate1 = 0;
    double p_gate2 = 0;
    double p_meas = 0;
    double p_reset = 0;
    double p_idle = 0;
    double p_ghz = 0;
    double p_bell = 0;
    /// When false, teleported CNOTs carry exactly the noise of the local CNOT they replace
    /// (plus the Bell channel): no noise on the gadget's own gates, measurements or extra ticks.
    bool bridge_overhead = true;
    GhzChannel ghz_channel = GhzChannel::kPerQubit;

    /// Every local rate set to p.
    static NoiseModel uniform(double p, double p_ghz = 0, double p_bell = 0);
    void validate() const;
};

/// p_bell = 5/4 (1 - F) for a depolarized Bell pair of fidelity F.
double bell_fidelity_to_p(double fidelity);
double bell_p_to_fidelity(double p_bell);

/// Bell preparation on (a, b), one DEPOLARIZE2[bell](p_bell), then the gate teleportation
/// implementing CX control->target with record-controlled corrections. No TICKs are emitted.
void append_teleported_cnot(Circuit &circuit, uint32_t control, uint32_t target, uint32_t a, uint32_t b,
                            const NoiseModel &noise);

/// Measures the X- or Z-parity of `data` through a GHZ state held on `ghz_qubits`.
/// Returns the measurement indices whose XOR is the stabilizer outcome. No TICKs are emitted.
std::vector<uint32_t> append_ghz_measurement(Circuit &circuit, const std::vector<uint32_t> &data, PauliBasis type,
                                             const std::vector<uint32_t> &ghz_qubits, const NoiseModel &noise);

Circuit build_surface_circuit(int d, size_t rounds, const NoiseModel &noise, bool networked, PauliBasis basis);

/// One slot of the depth-8 cycle for each check type: a neighbor term 0..5, or a special action.
struct BBLayer {
    static constexpr int kIdle = -1;
    static constexpr int kPrepare = -2;
    static constexpr int kMeasure = -3;
    int x = kIdle;
    int z = kIdle;
};
using BBSchedule = std::array<BBLayer, 8>;

/// X-check terms 0..2 are A1..A3 (left data), 3..5 are B1..B3 (right data). Z-check terms
/// 0..2 are B1^T..B3^T (left data), 3..5 are A1^T..A3^T (right data).
BBSchedule default_bb_schedule();
void validate_bb_schedule(const BBSchedule &schedule);

/// Depth-8 BB memory circuit. Interactions whose endpoints sit on different nodes of
/// `partition` become teleported CNOTs.
Circuit build_bb_circuit(const CssCode &code, size_t rounds, const NoiseModel &noise, const Partition *partition,
                         PauliBasis basis, const BBSchedule &schedule = default_bb_schedule());

/// Data qubit reached by term `term` of a check (see BBSchedule for the term order).
uint32_t bb_neighbor(const BBSpec &spec, PauliBasis check_type, uint32_t check, int term);

/// Detectors are (rounds+1) per basis check plus rounds per other-basis check.
size_t expected_detector_count(size_t basis_checks, size_t other_checks, size_t rounds);

}  // namespace netqec

#endif
